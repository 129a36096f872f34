# -*- coding: utf-8 -*-
import math

import numpy as np
import pytest

from evocar.backend.network import (Topology, chromosome_length, create_topology, decode, encode,
                                    steer, steering_command)


def _random_topology(rng):
    n_hidden_layers = rng.integers(1, 3)
    return Topology([rng.integers(1, 8)] + list(rng.integers(1, 8, size=n_hidden_layers)) + [2])


def _loop_oracle(chromosome, layer_sizes, inputs):
    """Scalar forward pass reading genes straight from the chromosome."""
    activations = list(inputs)
    offset = 0
    for n_src, n_dst in zip(layer_sizes[:-1], layer_sizes[1:]):
        sources = activations + [1.0]
        nxt = []
        for j in range(n_dst):
            total = 0.0
            for i in range(n_src + 1):
                total += sources[i] * chromosome[offset + i * n_dst + j]
            nxt.append(1.0 / (1.0 + math.exp(-total)))
        offset += (n_src + 1) * n_dst
        activations = nxt
    return activations


@pytest.mark.parametrize("layer_sizes, expected", [([2, 3, 2], 17), ([5, 6, 2], 50), ([1, 1, 2], 6),
                                                   ([5, 8, 4, 2], 48 + 36 + 10)])
def test_chromosome_length(layer_sizes, expected):
    assert chromosome_length(Topology(layer_sizes)) == expected


@pytest.mark.parametrize("layer_sizes", [[5, 2], [5, 6, 3], [0, 6, 2]])
def test_invalid_topology_is_rejected(layer_sizes):
    with pytest.raises(ValueError):
        Topology(layer_sizes)


def test_decode_follows_outgoing_weight_order():
    network = decode(np.arange(17, dtype=float), Topology([2, 3, 2]))
    hidden, output = network.weights
    assert hidden[0].tolist() == [0, 1, 2]
    assert hidden[2].tolist() == [6, 7, 8]
    assert output[3].tolist() == [15, 16]


def test_codec_round_trips_exactly():
    rng = np.random.default_rng(7)
    for _ in range(1000):
        topology = _random_topology(rng)
        chromosome = rng.normal(0, 3, size=chromosome_length(topology))
        network = decode(chromosome, topology)
        assert np.array_equal(encode(network), chromosome)
        again = decode(encode(network), topology)
        assert all(np.array_equal(a, b) for a, b in zip(again.weights, network.weights))


def test_decode_rejects_wrong_length():
    with pytest.raises(ValueError, match="expected 17 genes, got 16"):
        decode(np.zeros(16), Topology([2, 3, 2]))


def test_forward_matches_loop_oracle():
    rng = np.random.default_rng(11)
    for _ in range(100):
        topology = _random_topology(rng)
        chromosome = rng.normal(0, 2, size=chromosome_length(topology))
        inputs = rng.random(topology.n_inputs)
        outputs = decode(chromosome, topology).forward(inputs)
        expected = _loop_oracle(chromosome, topology.layer_sizes, inputs)
        assert np.allclose(outputs, expected, rtol=0, atol=1e-12)
        assert np.all((outputs > 0) & (outputs < 1))


def test_forward_of_hand_computed_network():
    network = decode(np.ones(6), Topology([1, 1, 2]))
    hidden = 1.0 / (1.0 + math.exp(-1.0))
    expected = 1.0 / (1.0 + math.exp(-(hidden + 1.0)))
    outputs = network.forward([0.0])
    assert np.allclose(outputs, [expected, expected], atol=1e-15)
    assert round(expected, 4) == 0.8495


def test_zero_network_is_neutral():
    topology = create_topology(5)
    network = decode(np.zeros(chromosome_length(topology)), topology)
    assert np.array_equal(network.forward(np.random.default_rng(0).random(5)), [0.5, 0.5])
    assert steer(network, np.ones(5)).steering_angle == 0.0


def test_forward_rejects_wrong_input_size():
    network = decode(np.zeros(17), Topology([2, 3, 2]))
    with pytest.raises(ValueError):
        network.forward([0.1, 0.2, 0.3])


def test_single_gene_change_changes_network():
    topology = Topology([2, 3, 2])
    chromosome = np.random.default_rng(3).normal(size=17)
    inputs = np.array([0.3, 0.9])
    reference = decode(chromosome, topology).forward(inputs)
    for k in range(17):
        perturbed = chromosome.copy()
        perturbed[k] += 1.0
        assert not np.array_equal(decode(perturbed, topology).forward(inputs), reference)


@pytest.mark.parametrize("outputs, max_angle, expected", [((0.5, 0.5), 0.7, 0.0),
                                                           ((1.0, 0.0), 0.5, 0.5),
                                                           ((0.3, 0.8), 0.6, -0.3)])
def test_steering_command(outputs, max_angle, expected):
    assert np.isclose(steering_command(outputs, max_angle), expected)


if __name__ == '__main__':
    pytest.main([__file__, "-v", "-s"])
