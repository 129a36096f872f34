# -*- coding: utf-8 -*-
# Deterministic multi-vehicle world and the chromosome fitness evaluation.

import math
from collections import deque, namedtuple
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from evocar.backend.collision import WALL, detect_collisions, responsible_parties
from evocar.backend.network import DEFAULT_MAX_STEERING, decode, steering_command
from evocar.backend.sensor import RangefinderConfig, sense
from evocar.backend.strategy import StrategySpec, reflect_heading, strategy_step
from evocar.backend.utils.geometry import normalize_angle, polygons_overlap
from evocar.backend.utils.track import Environment
from evocar.backend.vehicle import DEFAULT_LENGTH, VehicleState, step_vehicle

COLLISION = "collision"
SPIN_PENALTY = "spin-penalty"
STEP_CAP = "step-cap"

DEFAULT_DT = 0.05
DEFAULT_MAX_STEPS = 10000


@dataclass(frozen=True)
class SpinConfig:
    heading_threshold: float = 2 * math.pi
    displacement_threshold: float = 2 * DEFAULT_LENGTH
    window: int = 400
    enabled: bool = True


@dataclass(frozen=True)
class Opponent:
    """A non-ego vehicle; strategy None means an external controller drives it."""
    start: VehicleState
    strategy: Optional[StrategySpec] = None


@dataclass(frozen=True)
class Scenario:
    environment: Environment
    ego_start: VehicleState
    opponents: tuple = ()
    sensor: RangefinderConfig = field(default_factory=RangefinderConfig)
    dt: float = DEFAULT_DT
    max_steps: int = DEFAULT_MAX_STEPS
    spin: SpinConfig = field(default_factory=SpinConfig)
    max_steering: float = DEFAULT_MAX_STEERING
    name: str = "scenario"

    def __post_init__(self):
        object.__setattr__(self, "opponents", tuple(self.opponents))
        if self.dt <= 0:
            raise ValueError("dt must be > 0, got {}".format(self.dt))
        if self.max_steps < 1:
            raise ValueError("max_steps must be >= 1, got {}".format(self.max_steps))
        if not 0 < self.max_steering < math.pi / 2:
            raise ValueError("max_steering must be in (0, pi/2), got {}".format(self.max_steering))
        starts = self.starts()
        corners = [s.corners() for s in starts]
        for i in range(len(starts)):
            for j in range(i + 1, len(starts)):
                if polygons_overlap(corners[i], corners[j]):
                    raise ValueError("scenario {!r}: vehicles {} and {} overlap at start".format(self.name, i, j))

    def starts(self):
        return [self.ego_start] + [o.start for o in self.opponents]

    @property
    def n_vehicles(self):
        return 1 + len(self.opponents)


@dataclass
class EvaluationResult:
    fitness: int
    termination: str
    responsible_collision: bool
    trace: Optional[list] = None


class NetworkController(object):
    def __init__(self, network, sensor, max_steering=DEFAULT_MAX_STEERING):
        self.network = network
        self._sensor = sensor
        self._max_steering = max_steering

    def steer(self, world, index):
        readings = world.sense(index, self._sensor)
        return steering_command(self.network.forward(readings), self._max_steering)


class StrategyController(object):
    bounces = True

    def __init__(self, spec, seed):
        self._spec = spec
        self._seed = seed

    def steer(self, world, index):
        return strategy_step(self._spec, world.states[index], world.step_index, self._seed)


StepReport = namedtuple("StepReport", ["step", "events", "blame"])


def responsible_ids(report):
    ids = set()
    for _, parties in report.blame:
        ids |= parties
    return ids


class World(object):
    """One simulation instance; every controller steers from the same pre-step snapshot."""

    def __init__(self, scenario, controllers):
        if len(controllers) != scenario.n_vehicles:
            raise ValueError("scenario has {} vehicles but {} controllers were given".format(
                scenario.n_vehicles, len(controllers)))
        self.scenario = scenario
        self.controllers = list(controllers)
        self.states = scenario.starts()
        self.step_index = 0

    def sense(self, index, config=None):
        others = self.states[:index] + self.states[index + 1:]
        return sense(self.states[index], self.scenario.environment, others, config or self.scenario.sensor)

    def step(self):
        """
        # Returns
            report : StepReport
                events detected after the move and, per event, the responsible vehicles
        """
        prev = self.states
        angles = [c.steer(self, i) for i, c in enumerate(self.controllers)]
        curr = [step_vehicle(s, a, self.scenario.dt) for s, a in zip(prev, angles)]
        events = detect_collisions(curr, self.scenario.environment)
        blame = [(event, responsible_parties(prev, curr, event)) for event in events]

        walls = self.scenario.environment.walls
        reflected = set()
        for event in events:
            i = event.participants[0]
            if event.kind != WALL or not getattr(self.controllers[i], "bounces", False):
                continue
            wall = walls[event.wall]
            vertical = bool(wall[0] == wall[2])
            if (i, vertical) in reflected:
                continue
            reflected.add((i, vertical))
            curr[i] = prev[i].moved_to(prev[i].x, prev[i].y, reflect_heading(curr[i].heading, wall))

        self.states = curr
        self.step_index += 1
        return StepReport(self.step_index - 1, events, blame)

    def respawn(self, index):
        self.states[index] = self.scenario.starts()[index]

    def trace_rows(self):
        return [(self.step_index, i, s.x, s.y, s.heading) for i, s in enumerate(self.states)]


def detect_spinning(window, heading_threshold, displacement_threshold):
    """True when the vehicle turned through heading_threshold while barely moving.

    # Args
        window : list of VehicleState, consecutive steps
    """
    headings = np.array([s.heading for s in window])
    turned = sum(normalize_angle(d) for d in np.diff(headings))
    displacement = math.hypot(window[-1].x - window[0].x, window[-1].y - window[0].y)
    return abs(turned) >= heading_threshold and displacement < displacement_threshold


class SpinMonitor(object):
    """Rolling spin check over the last config.window steps of one vehicle."""

    def __init__(self, config):
        self._config = config
        self._states = deque(maxlen=config.window + 1)
        self._increments = deque(maxlen=config.window)
        self._turned = 0.0

    def reset(self):
        self._states.clear()
        self._increments.clear()
        self._turned = 0.0

    def update(self, state):
        if self._states:
            increment = normalize_angle(state.heading - self._states[-1].heading)
            if len(self._increments) == self._increments.maxlen:
                self._turned -= self._increments[0]
            self._increments.append(increment)
            self._turned += increment
        self._states.append(state)

        if not self._config.enabled or len(self._states) < self._states.maxlen:
            return False
        # running sum only pre-screens; the exact window check decides
        if abs(self._turned) < self._config.heading_threshold - 1e-6:
            return False
        return detect_spinning(list(self._states),
                               self._config.heading_threshold,
                               self._config.displacement_threshold)


def evaluate_chromosome(chromosome, scenario, topology, seed, trace=False):
    """Fitness of one chromosome driving the ego vehicle (index 0) in a freshly reset world.

    # Args
        chromosome : array
        scenario : Scenario, every opponent strategy-driven
        topology : Topology, n_inputs == scenario.sensor.beam_count
        seed : int, seeds the opponents' strategies
        trace : bool, keep (step, id, x, y, heading) rows

    # Returns
        result : EvaluationResult
            fitness = completed collision-free steps, 0 on spin penalty
    """
    if topology.n_inputs != scenario.sensor.beam_count:
        raise ValueError("network input size {} does not match sensor beam_count {}".format(
            topology.n_inputs, scenario.sensor.beam_count))
    network = decode(chromosome, topology)
    controllers = [NetworkController(network, scenario.sensor, scenario.max_steering)]
    for k, opponent in enumerate(scenario.opponents, 1):
        if opponent.strategy is None:
            raise ValueError("scenario {!r}: opponent {} has no strategy".format(scenario.name, k))
        controllers.append(StrategyController(opponent.strategy, seed))

    world = World(scenario, controllers)
    monitor = SpinMonitor(scenario.spin)
    monitor.update(world.states[0])
    rows = world.trace_rows() if trace else None

    for step in range(scenario.max_steps):
        report = world.step()
        if trace:
            rows.extend(world.trace_rows())
        if 0 in responsible_ids(report):
            return EvaluationResult(step, COLLISION, True, rows)
        if monitor.update(world.states[0]):
            return EvaluationResult(0, SPIN_PENALTY, False, rows)
    return EvaluationResult(scenario.max_steps, STEP_CAP, False, rows)


class ScenarioFitness(object):
    """Picklable fitness function: mean fitness over one or more scenarios.

    Every chromosome of a run is scored against the same worlds (evaluation_seed),
    so the per-individual seed the GA passes in is not used.
    """

    def __init__(self, scenarios, topology, evaluation_seed):
        self._scenarios = list(scenarios)
        self._topology = topology
        self._evaluation_seed = evaluation_seed

    def per_scenario(self, chromosome):
        return [evaluate_chromosome(chromosome, s, self._topology, self._evaluation_seed).fitness
                for s in self._scenarios]

    def __call__(self, chromosome, seed=None):
        return float(np.mean(self.per_scenario(chromosome)))
