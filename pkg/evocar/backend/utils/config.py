# -*- coding: utf-8 -*-
# JSON run configuration: schema checks, defaults and scenario assembly.
#
# Every problem is collected with its dotted field path and reported at once
# through ConfigError. Angles are given in degrees (*_deg keys).

import hashlib
import json
import math
import os
from dataclasses import dataclass, field
from typing import Optional

from evocar.backend.evolution import GAConfig
from evocar.backend.network import Topology, create_topology
from evocar.backend.sensor import RangefinderConfig
from evocar.backend.strategy import STRATEGY_KINDS, WAYPOINT_PATROL, StrategySpec
from evocar.backend.utils.seeding import derive_seed
from evocar.backend.utils.track import build_arena, bundled_track, perimeter_poses, read_track, TRACK_PRESETS
from evocar.backend.vehicle import VehicleState
from evocar.backend.world import Opponent, Scenario, SpinConfig

NAVIGATION = "navigation"
SENSOR_SWEEP = "sensor-sweep"
INDIVIDUAL_CA = "individual-ca"
CROSS_EVAL = "cross-eval"
INCREMENTAL = "incremental"
BROADCAST_CHAMPION = "broadcast-champion"
BROADCAST_POPULATION = "broadcast-population"
EXPERIMENT_KINDS = (NAVIGATION, SENSOR_SWEEP, INDIVIDUAL_CA, CROSS_EVAL, INCREMENTAL,
                    BROADCAST_CHAMPION, BROADCAST_POPULATION)
TRACK_KINDS = (NAVIGATION, SENSOR_SWEEP)

_RUN_STREAM = 1
_EVALUATION_STREAM = 2


class ConfigError(ValueError):
    def __init__(self, errors):
        self.errors = list(errors)
        super(ConfigError, self).__init__("invalid configuration:\n  " + "\n  ".join(self.errors))


@dataclass
class ExperimentSpec:
    kind: str
    name: str
    topology: Topology
    ga: GAConfig
    generations: int
    replicates: tuple
    master_seed: int
    scenarios: dict
    hidden_layers: tuple = (6,)
    beam_counts: tuple = ()
    acceptance_fitness: float = 0.0
    acceptance_threshold: float = 0.0
    generation_budget: int = 0
    learners: int = 0
    measure_steps: int = 0
    training_steps: int = 0
    source_strategy: str = ""
    champion_path: Optional[str] = None
    population_path: Optional[str] = None

    def run_seed(self, replicate):
        return derive_seed(self.master_seed, _RUN_STREAM, replicate)

    @property
    def evaluation_seed(self):
        return derive_seed(self.master_seed, _EVALUATION_STREAM)

    @property
    def scenario(self):
        return next(iter(self.scenarios.values()))


@dataclass
class RunConfig:
    config_path: str
    out_dir: str = "results"
    master_seed: int = 0
    workers: int = 1
    verbosity: int = 1
    trace: bool = False
    plot: bool = False
    config_hash: str = field(default="", repr=False)


class _Section(object):
    """Typed access to one JSON object, recording problems instead of raising."""

    def __init__(self, data, path, errors):
        self._path = path
        self._errors = errors
        self._seen = set()
        if data is None:
            data = {}
        if not isinstance(data, dict):
            errors.append("{}: expected an object, got {}".format(path, type(data).__name__))
            data = {}
        self._data = data

    @property
    def errors(self):
        return self._errors

    def _name(self, key):
        if not key:
            return self._path
        return "{}.{}".format(self._path, key) if self._path else key

    def error(self, key, message):
        self._errors.append("{}: {}".format(self._name(key), message))

    def has(self, key):
        return self._data.get(key) is not None

    def raw(self, key, default=None):
        self._seen.add(key)
        value = self._data.get(key)
        return default if value is None else value

    def number(self, key, default, minimum=None, maximum=None, integer=False, strict_minimum=False):
        value = self.raw(key, default)
        kinds = (int,) if integer else (int, float)
        if isinstance(value, bool) or not isinstance(value, kinds):
            self.error(key, "expected {}, got {!r}".format("an integer" if integer else "a number", value))
            return default
        if minimum is not None and (value <= minimum if strict_minimum else value < minimum):
            self.error(key, "must be {} {}, got {}".format(">" if strict_minimum else ">=", minimum, value))
        if maximum is not None and value > maximum:
            self.error(key, "must be <= {}, got {}".format(maximum, value))
        return value

    def integer(self, key, default, minimum=None, maximum=None):
        return self.number(key, default, minimum, maximum, integer=True)

    def flag(self, key, default):
        value = self.raw(key, default)
        if not isinstance(value, bool):
            self.error(key, "expected true or false, got {!r}".format(value))
            return default
        return value

    def text(self, key, default, choices=None):
        value = self.raw(key, default)
        if not isinstance(value, str):
            self.error(key, "expected a string, got {!r}".format(value))
            return default
        if choices is not None and value not in choices:
            self.error(key, "must be one of {}, got {!r}".format(list(choices), value))
        return value

    def integers(self, key, default, minimum=None):
        value = self.raw(key, default)
        if not isinstance(value, (list, tuple)) or not all(isinstance(v, int) and not isinstance(v, bool)
                                                            for v in value):
            self.error(key, "expected a list of integers, got {!r}".format(value))
            return tuple(default)
        if minimum is not None and any(v < minimum for v in value):
            self.error(key, "every entry must be >= {}, got {}".format(minimum, list(value)))
        return tuple(value)

    def numbers(self, key, default, length=None):
        value = self.raw(key, default)
        if not isinstance(value, (list, tuple)) or not all(isinstance(v, (int, float)) and not isinstance(v, bool)
                                                            for v in value):
            self.error(key, "expected a list of numbers, got {!r}".format(value))
            return tuple(default)
        if length is not None and len(value) != length:
            self.error(key, "expected {} numbers, got {}".format(length, len(value)))
            return tuple(default)
        return tuple(float(v) for v in value)

    def section(self, key):
        self._seen.add(key)
        return _Section(self._data.get(key), self._name(key), self._errors)

    def finish(self):
        for key in sorted(set(self._data) - self._seen):
            self.error(key, "unknown key")


def load_json(config_file):
    if not os.path.isfile(config_file):
        raise ConfigError(["config file not found: {}".format(config_file)])
    with open(config_file) as config_buffer:
        text = config_buffer.read()
    try:
        return json.loads(text), hashlib.sha256(text.encode("utf-8")).hexdigest()
    except ValueError as e:
        raise ConfigError(["{}: not valid JSON ({})".format(config_file, e)])


def parse_config(config_file, out_dir=None, seed=None, workers=None, verbosity=None, trace=False, plot=False):
    """
    # Args
        config_file : str
        out_dir, seed, workers, verbosity, trace, plot : command-line overrides

    # Returns
        spec : ExperimentSpec
        run_config : RunConfig

    # Raises
        ConfigError listing every problem found
    """
    data, config_hash = load_json(config_file)
    errors = []
    root = _Section(data, "", errors)
    config_dir = os.path.dirname(os.path.abspath(config_file))

    exp = root.section("experiment")
    kind = exp.text("kind", NAVIGATION, EXPERIMENT_KINDS)
    name = exp.text("name", os.path.splitext(os.path.basename(config_file))[0])
    generations = exp.integer("generations", 60, minimum=1)
    replicates = exp.integers("seeds", [0], minimum=0)
    if not replicates:
        exp.error("seeds", "needs at least one seed")
    master_seed = exp.integer("seed", 0, minimum=0)
    out = exp.text("out_dir", "results")
    if seed is not None:
        master_seed = seed
    if out_dir is not None:
        out = out_dir
    exp.finish()

    ga = _parse_ga(root.section("ga"), errors)
    sensor = _parse_sensor(root.section("sensor"))
    vehicle = _parse_vehicle(root.section("vehicle"))
    dt, max_steps, spin = _parse_simulation(root.section("simulation"), vehicle)
    topology, hidden, max_steering = _parse_network(root.section("network"), sensor, kind)

    sweep = root.section("sweep")
    beam_counts = sweep.integers("beam_counts", [1, 3, 5, 7, 9], minimum=1)
    acceptance_fitness = sweep.number("acceptance_fitness", 0.0, minimum=0)
    if kind == SENSOR_SWEEP and not beam_counts:
        sweep.error("beam_counts", "needs at least one beam count")
    sweep.finish()

    inc = root.section("incremental")
    acceptance_threshold = inc.number("acceptance_threshold", 2000.0, minimum=0, strict_minimum=True)
    generation_budget = inc.integer("generation_budget", 50, minimum=1)
    inc.finish()

    bc = root.section("broadcast")
    learners = bc.integer("learners", 4, minimum=1)
    measure_seconds = bc.number("measure_seconds", 100.0, minimum=0, strict_minimum=True)
    training_seconds = bc.number("training_seconds", 100.0, minimum=0)
    source_strategy = bc.text("source_strategy", "")
    champion_path = _optional_path(bc, "champion", config_dir)
    population_path = _optional_path(bc, "population", config_dir)
    bc.finish()

    strategies = _parse_strategies(root, max_steering)
    if kind == INCREMENTAL and 0.8 * acceptance_threshold > max_steps:
        errors.append("incremental.acceptance_threshold: 80% of {} exceeds simulation.max_steps {}".format(
            acceptance_threshold, max_steps))
    if kind in (CROSS_EVAL, INCREMENTAL) and len(strategies) < 2:
        errors.append("strategies: {} needs at least 2 strategies, got {}".format(kind, len(strategies)))
    elif kind not in TRACK_KINDS and not strategies:
        errors.append("strategies: {} needs at least 1 strategy".format(kind))
    if source_strategy and source_strategy not in strategies:
        errors.append("broadcast.source_strategy: unknown strategy {!r}".format(source_strategy))

    env_section = root.section("environment")
    opp_section = root.section("opponents")
    scenarios = {}
    if not errors:
        common = dict(sensor=sensor, dt=dt, max_steps=max_steps, spin=spin, max_steering=max_steering)
        scenarios = _build_scenarios(kind, env_section, opp_section, vehicle, strategies,
                                     learners, common, config_dir, errors)
        env_section.finish()
        opp_section.finish()
    root.finish()

    if errors:
        raise ConfigError(errors)

    spec = ExperimentSpec(kind=kind,
                          name=name,
                          topology=topology,
                          ga=ga,
                          generations=generations,
                          replicates=replicates,
                          master_seed=master_seed,
                          scenarios=scenarios,
                          hidden_layers=hidden,
                          beam_counts=beam_counts,
                          acceptance_fitness=acceptance_fitness,
                          acceptance_threshold=acceptance_threshold,
                          generation_budget=generation_budget,
                          learners=learners,
                          measure_steps=int(round(measure_seconds / dt)),
                          training_steps=int(round(training_seconds / dt)),
                          source_strategy=source_strategy or (next(iter(strategies)) if strategies else ""),
                          champion_path=champion_path,
                          population_path=population_path)
    run_config = RunConfig(config_path=config_file,
                           out_dir=out,
                           master_seed=master_seed,
                           workers=1 if workers is None else workers,
                           verbosity=1 if verbosity is None else verbosity,
                           trace=trace,
                           plot=plot,
                           config_hash=config_hash)
    return spec, run_config


def _optional_path(section, key, config_dir):
    value = section.raw(key)
    if value is None:
        return None
    if not isinstance(value, str):
        section.error(key, "expected a file path, got {!r}".format(value))
        return None
    path = value if os.path.isabs(value) else os.path.join(config_dir, value)
    if not os.path.isfile(path):
        section.error(key, "file not found: {}".format(path))
    return path


def _parse_ga(section, errors):
    defaults = GAConfig()
    config = GAConfig(population_size=section.integer("population_size", defaults.population_size, minimum=2),
                      mutation_probability=section.number("mutation_probability", defaults.mutation_probability),
                      crossover_probability=section.number("crossover_probability", defaults.crossover_probability),
                      crossover_site_mean=section.number("crossover_site_mean", defaults.crossover_site_mean),
                      crossover_site_stddev=section.number("crossover_site_stddev", defaults.crossover_site_stddev),
                      tournament_size=section.integer("tournament_size", defaults.tournament_size, minimum=1),
                      init_weight_range=section.numbers("init_weight_range", defaults.init_weight_range, length=2),
                      mutation_sigma=section.number("mutation_sigma", defaults.mutation_sigma))
    section.finish()
    errors.extend("ga.{}".format(e) for e in config.check())
    return config


def _parse_sensor(section):
    defaults = RangefinderConfig()
    beam_count = section.integer("beam_count", defaults.beam_count, minimum=1)
    fov_deg = section.number("field_of_view_deg", 180.0, minimum=0, maximum=360)
    max_range = section.number("max_range", defaults.max_range, minimum=0, strict_minimum=True)
    section.finish()
    try:
        return RangefinderConfig(beam_count, math.radians(fov_deg), max_range)
    except ValueError:
        return defaults


def _parse_vehicle(section):
    vehicle = dict(speed=section.number("speed", 10.0, minimum=0),
                   wheelbase=section.number("wheelbase", 2.5, minimum=0, strict_minimum=True),
                   length=section.number("length", 4.0, minimum=0, strict_minimum=True),
                   width=section.number("width", 2.0, minimum=0, strict_minimum=True))
    section.finish()
    return vehicle


def _parse_simulation(section, vehicle):
    dt = section.number("dt", 0.05, minimum=0, strict_minimum=True)
    max_steps = section.integer("max_steps", 10000, minimum=1)
    spin_section = section.section("spin")
    spin = SpinConfig(heading_threshold=math.radians(spin_section.number("heading_threshold_deg", 360.0,
                                                                         minimum=0, strict_minimum=True)),
                      displacement_threshold=spin_section.number("displacement_threshold",
                                                                 2 * vehicle["length"], minimum=0),
                      window=spin_section.integer("window", 400, minimum=1),
                      enabled=spin_section.flag("enabled", True))
    spin_section.finish()
    section.finish()
    return dt, max_steps, spin


def _parse_network(section, sensor, kind):
    hidden = section.integers("hidden_layers", [6], minimum=1)
    if not hidden:
        section.error("hidden_layers", "needs at least one hidden layer")
        hidden = (6,)
    max_steering_deg = section.number("max_steering_deg", 30.0, minimum=0, maximum=89.9, strict_minimum=True)
    topology = create_topology(sensor.beam_count, hidden)
    if section.has("layer_sizes"):
        sizes = section.integers("layer_sizes", [], minimum=1)
        if kind == SENSOR_SWEEP:
            section.error("layer_sizes", "cannot be fixed for a sensor sweep; use hidden_layers")
        elif len(sizes) < 3:
            section.error("layer_sizes", "needs at least 3 layers, got {}".format(list(sizes)))
        elif sizes[-1] != 2:
            section.error("layer_sizes", "output layer must have 2 neurons, got {}".format(sizes[-1]))
        elif sizes[0] != sensor.beam_count:
            section.error("layer_sizes", "input layer size {} does not match sensor.beam_count {}".format(
                sizes[0], sensor.beam_count))
        else:
            topology = Topology(sizes)
            hidden = tuple(sizes[1:-1])
    else:
        section.raw("layer_sizes")
    section.finish()
    return topology, tuple(hidden), math.radians(max_steering_deg)


def _parse_strategies(root, max_steering):
    """
    # Returns
        strategies : dict, name -> (StrategySpec or None, raw section)
    """
    raw = root.raw("strategies", [])
    strategies = {}
    if not isinstance(raw, list):
        root.error("strategies", "expected a list of strategy objects")
        return strategies
    for i, entry in enumerate(raw):
        section = _Section(entry, "strategies[{}]".format(i), root.errors)
        kind = section.text("kind", "", STRATEGY_KINDS)
        name = section.text("name", "strategy{}".format(i + 1))
        params = dict(turn_interval=section.integer("turn_interval", 40, minimum=1),
                      turn_magnitude=math.radians(section.number("turn_magnitude_deg", 20.0, minimum=0)),
                      circle_radius=section.number("circle_radius", 15.0),
                      gain=section.number("gain", 1.0, minimum=0),
                      max_steering=max_steering)
        waypoints = section.raw("waypoints", [])
        if not isinstance(waypoints, list) or not all(isinstance(p, list) and len(p) == 2 for p in waypoints):
            section.error("waypoints", "expected a list of [x, y] pairs")
            waypoints = []
        if kind == "circling" and params["circle_radius"] == 0:
            section.error("circle_radius", "must be non-zero")
        section.finish()
        if name in strategies:
            section.error("name", "duplicate strategy name {!r}".format(name))
        strategies[name] = (kind, params, [tuple(p) for p in waypoints])
    return strategies


def _build_scenarios(kind, env, opp, vehicle, strategies, learners, common, config_dir, errors):
    count = opp.integer("count", 0 if kind in TRACK_KINDS else 8, minimum=0)
    margin = opp.number("margin", 6.0, minimum=0)
    environment, start = _parse_environment(env, vehicle, config_dir)
    if environment is None:
        return {}

    if kind in TRACK_KINDS:
        if count:
            opp.error("count", "{} runs on a static track; opponents must be 0".format(kind))
            return {}
        x, y, heading = start
        try:
            return {"track": Scenario(environment, VehicleState(x, y, heading, **vehicle), (),
                                      name="track", **common)}
        except ValueError as e:
            errors.append("environment: {}".format(e))
            return {}

    n_learners = learners if kind in (BROADCAST_CHAMPION, BROADCAST_POPULATION) else 1
    try:
        poses = perimeter_poses(environment.bounds, n_learners + count, margin)
    except ValueError as e:
        opp.error("margin", str(e))
        return {}
    learner_slots = sorted({int(round(k * len(poses) / float(n_learners))) for k in range(n_learners)})

    scenarios = {}
    for name, (strategy_kind, params, waypoints) in strategies.items():
        if strategy_kind == WAYPOINT_PATROL and not waypoints:
            waypoints = _corner_waypoints(environment.bounds, margin)
        opponents = []
        ego = None
        for slot, (x, y, heading) in enumerate(poses):
            state = VehicleState(x, y, heading, **vehicle)
            if slot in learner_slots:
                if ego is None:
                    ego = state
                else:
                    opponents.append(Opponent(state, None))
            else:
                try:
                    strategy = StrategySpec(strategy_kind, waypoints=tuple(waypoints), seed_offset=slot, **params)
                except ValueError as e:
                    errors.append("strategies.{}: {}".format(name, e))
                    return {}
                opponents.append(Opponent(state, strategy))
        try:
            scenarios[name] = Scenario(environment, ego, tuple(opponents), name=name, **common)
        except ValueError as e:
            errors.append("strategies.{}: {}".format(name, e))
    return scenarios


def _corner_waypoints(bounds, margin):
    xmin, ymin, xmax, ymax = bounds
    return [(xmin + margin, ymin + margin), (xmax - margin, ymin + margin),
            (xmax - margin, ymax - margin), (xmin + margin, ymax - margin)]


def _parse_environment(section, vehicle, config_dir):
    choices = [k for k in ("track", "track_file", "arena") if section.has(k)]
    if len(choices) != 1:
        section.error("", "exactly one of track, track_file or arena is required, got {}".format(choices))
        for k in ("track", "track_file", "arena", "start", "lane_length"):
            section.raw(k)
        return None, None

    lane_length = section.number("lane_length", 40.0, minimum=0, strict_minimum=True)
    start = None
    if section.has("start"):
        x, y, heading_deg = section.numbers("start", (0., 0., 0.), length=3)
        start = (x, y, math.radians(heading_deg))

    if choices[0] == "track":
        name = section.text("track", "wide", sorted(TRACK_PRESETS))
        if name not in TRACK_PRESETS:
            return None, None
        environment, default_start = bundled_track(name, vehicle["width"], lane_length)
    elif choices[0] == "track_file":
        path = section.text("track_file", "")
        path = path if os.path.isabs(path) else os.path.join(config_dir, path)
        if not os.path.isfile(path):
            section.error("track_file", "file not found: {}".format(path))
            return None, None
        try:
            environment = read_track(path)
        except ValueError as e:
            section.error("track_file", str(e))
            return None, None
        default_start = None
        if start is None:
            section.error("start", "required with track_file ([x, y, heading_deg])")
            return None, None
    else:
        width, height = section.numbers("arena", (60., 60.), length=2)
        if width <= 0 or height <= 0:
            section.error("arena", "width and height must be > 0")
            return None, None
        environment, default_start = build_arena(width, height), None
    return environment, start or default_start
