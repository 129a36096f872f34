# -*- coding: utf-8 -*-
# Fixed-topology sigmoid feedforward network and its flat chromosome codec.
#
# Chromosome layout: layer by layer; inside a layer block every source neuron
# contributes its outgoing weights consecutively, and the bias node is the
# last source neuron of the block.

from collections import namedtuple

import numpy as np

N_OUTPUTS = 2
DEFAULT_HIDDEN = (6,)
DEFAULT_MAX_STEERING = np.deg2rad(30.0)


class Topology(object):
    """Neuron count of every layer, input first, output (2 neurons) last."""

    def __init__(self, layer_sizes):
        layer_sizes = tuple(int(n) for n in layer_sizes)
        if len(layer_sizes) < 3:
            raise ValueError("topology needs at least 3 layers, got {}".format(list(layer_sizes)))
        if min(layer_sizes) < 1:
            raise ValueError("every layer needs at least one neuron, got {}".format(list(layer_sizes)))
        if layer_sizes[-1] != N_OUTPUTS:
            raise ValueError("output layer must have {} neurons, got {}".format(N_OUTPUTS, layer_sizes[-1]))
        self._layer_sizes = layer_sizes

    @property
    def layer_sizes(self):
        return self._layer_sizes

    @property
    def n_inputs(self):
        return self._layer_sizes[0]

    def block_shapes(self):
        """
        # Returns
            shapes : list of (source_size + 1, target_size) tuples, one per layer pair
        """
        return [(n_src + 1, n_dst) for n_src, n_dst in zip(self._layer_sizes[:-1], self._layer_sizes[1:])]

    def __eq__(self, other):
        return isinstance(other, Topology) and self._layer_sizes == other._layer_sizes

    def __hash__(self):
        return hash(self._layer_sizes)

    def __repr__(self):
        return "Topology({})".format(list(self._layer_sizes))


def create_topology(n_inputs, hidden_layers=DEFAULT_HIDDEN):
    return Topology([n_inputs] + list(hidden_layers) + [N_OUTPUTS])


def chromosome_length(topology):
    return sum(rows * cols for rows, cols in topology.block_shapes())


def sigmoid(x):
    with np.errstate(over="ignore"):
        return 1. / (1. + np.exp(-x))


class FeedforwardNetwork(object):
    def __init__(self, topology, weights):
        """
        # Args
            topology : Topology
            weights : list of arrays
                one (source_size + 1, target_size) matrix per layer pair,
                the last row holding the bias weights
        """
        shapes = topology.block_shapes()
        if len(weights) != len(shapes):
            raise ValueError("expected {} weight matrices, got {}".format(len(shapes), len(weights)))
        for i, (w, shape) in enumerate(zip(weights, shapes)):
            if np.shape(w) != shape:
                raise ValueError("weight matrix {} must be {}, got {}".format(i, shape, np.shape(w)))
        self._topology = topology
        self._weights = [np.array(w, dtype=np.float64) for w in weights]

    @property
    def topology(self):
        return self._topology

    @property
    def weights(self):
        return self._weights

    def forward(self, inputs):
        """
        # Args
            inputs : array, shape of (n_inputs,)

        # Returns
            outputs : array, shape of (2,)
                left and right steering forces, each in (0, 1)
        """
        activation = np.asarray(inputs, dtype=np.float64)
        if activation.shape != (self._topology.n_inputs,):
            raise ValueError("network expects {} inputs, got shape {}".format(self._topology.n_inputs,
                                                                              activation.shape))
        for w in self._weights:
            activation = sigmoid(np.append(activation, 1.0).dot(w))
        return activation

    def encode(self):
        return encode(self)


def decode(chromosome, topology):
    """Build the network whose weights are laid out in the chromosome.

    # Args
        chromosome : array, shape of (chromosome_length(topology),)
        topology : Topology

    # Returns
        network : FeedforwardNetwork
    """
    genes = np.asarray(chromosome, dtype=np.float64)
    expected = chromosome_length(topology)
    if genes.ndim != 1 or len(genes) != expected:
        raise ValueError("chromosome length mismatch for {}: expected {} genes, got {}".format(
            topology, expected, genes.size))

    weights = []
    offset = 0
    for rows, cols in topology.block_shapes():
        # row-major: row i = outgoing weights of source neuron i, bias row last
        weights.append(genes[offset:offset + rows * cols].reshape(rows, cols).copy())
        offset += rows * cols
    return FeedforwardNetwork(topology, weights)


def encode(network):
    return np.concatenate([w.ravel() for w in network.weights])


SteeringOutput = namedtuple("SteeringOutput", ["left_force", "right_force", "steering_angle"])


def steer(network, inputs, max_angle=DEFAULT_MAX_STEERING):
    left, right = network.forward(inputs)
    return SteeringOutput(left, right, steering_command((left, right), max_angle))


def steering_command(outputs, max_angle=DEFAULT_MAX_STEERING):
    """Positive angles turn left.

    # Args
        outputs : (left_force, right_force)
        max_angle : float, radians

    # Returns
        steering_angle : float, radians
    """
    left, right = outputs
    return max_angle * (float(left) - float(right))
