# -*- coding: utf-8 -*-
# This module is responsible for communicating with the outside of the evocar package.
# Every experiment protocol is driven from here on top of the backend GA and simulator.

import contextlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np
from tqdm import tqdm

from evocar.backend.collision import VEHICLE
from evocar.backend.evolution import EvolutionHistory, GeneticAlgorithm, Individual, evolve
from evocar.backend.network import chromosome_length, create_topology, decode
from evocar.backend.utils.eval.rates import CollisionRateReport, collision_rate
from evocar.backend.utils.fit import check_fitnesses
from evocar.backend.utils.seeding import derive_seed, make_rng
from evocar.backend.world import (NetworkController, ScenarioFitness, SpinMonitor, StrategyController, World,
                                  evaluate_chromosome, responsible_ids)

ACCEPTANCE_FRACTION = 0.8

_BEFORE_STREAM = 3
_LEARNER_STREAM = 4


@contextlib.contextmanager
def worker_pool(workers):
    """One process pool shared by every GA run of an experiment; None when serial."""
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            yield pool
    else:
        yield None


class _Progress(object):
    """tqdm bar over generations plus one console line per generation."""

    def __init__(self, label, total, verbosity=1, scenarios=None, topology=None, seed=0):
        self._label = label
        self._verbosity = verbosity
        self._scenarios = scenarios or []
        self._topology = topology
        self._seed = seed
        self._bar = tqdm(total=total, desc=label, disable=verbosity < 1, leave=False)

    def __call__(self, record):
        self._bar.update(1)
        if self._verbosity >= 1:
            tqdm.write("[{}] generation {}: best {:g} mean {:.1f}".format(
                self._label, record.generation, record.best_fitness, record.mean_fitness))
        if self._verbosity >= 2:
            for scenario in self._scenarios:
                result = evaluate_chromosome(record.best_chromosome, scenario, self._topology, self._seed)
                tqdm.write("    {}: {} after {} steps".format(scenario.name, result.termination, result.fitness))

    def close(self):
        self._bar.close()


def training_scenario(scenario):
    """The scenario with externally controlled vehicles removed, leaving ego plus scripted opponents."""
    return replace(scenario, opponents=tuple(o for o in scenario.opponents if o.strategy is not None))


def learner_ids(scenario):
    return [0] + [k for k, o in enumerate(scenario.opponents, 1) if o.strategy is None]


def train_replicates(spec, scenarios, topology, label, workers=1, verbosity=1, executor=None):
    """
    # Args
        spec : ExperimentSpec
        scenarios : list of Scenario, fitness is the mean over them
        topology : Topology
        label : str, progress prefix

    # Returns
        histories : dict, replicate -> EvolutionHistory
    """
    fitness_fn = ScenarioFitness(scenarios, topology, spec.evaluation_seed)
    histories = {}
    for replicate in spec.replicates:
        progress = _Progress("{} seed {}".format(label, replicate), spec.generations, verbosity,
                             scenarios, topology, spec.evaluation_seed)
        histories[replicate] = evolve(fitness_fn,
                                      spec.ga,
                                      topology,
                                      spec.generations,
                                      spec.run_seed(replicate),
                                      workers=workers,
                                      callback=progress,
                                      executor=executor)
        progress.close()
    return histories


def run_navigation(spec, workers=1, verbosity=1):
    """
    # Returns
        histories : dict, replicate -> EvolutionHistory
    """
    scenario = spec.scenario
    if scenario.opponents:
        raise ValueError("navigation runs on a static track; scenario {!r} has {} opponents".format(
            scenario.name, len(scenario.opponents)))
    with worker_pool(workers) as executor:
        return train_replicates(spec, [scenario], spec.topology, "navigation", workers, verbosity, executor)


def run_sensor_sweep(spec, workers=1, verbosity=1):
    """Same GA settings and run seeds for every beam count; only the input layer changes.

    # Returns
        sweep : dict, beam_count -> {replicate -> EvolutionHistory}
    """
    base = spec.scenario
    sweep = {}
    with worker_pool(workers) as executor:
        for beam_count in spec.beam_counts:
            topology = create_topology(beam_count, spec.hidden_layers)
            scenario = replace(base, sensor=replace(base.sensor, beam_count=beam_count))
            sweep[beam_count] = train_replicates(spec, [scenario], topology, "{}-beam".format(beam_count),
                                                 workers, verbosity, executor)
    return sweep


def generations_to_reach(history, fitness):
    """First generation whose best fitness reaches fitness, None if never."""
    for record in history.records:
        if record.best_fitness >= fitness:
            return record.generation
    return None


def run_individual_ca(spec, strategies=None, workers=1, verbosity=1):
    """Evolve the ego alone against each strategy's scripted opponents.

    # Returns
        runs : dict, strategy -> {replicate -> EvolutionHistory}
    """
    names = list(spec.scenarios) if strategies is None else list(strategies)
    runs = {}
    with worker_pool(workers) as executor:
        for name in names:
            scenario = training_scenario(spec.scenarios[name])
            runs[name] = train_replicates(spec, [scenario], spec.topology, name, workers, verbosity, executor)
    return runs


def champion(histories):
    """Best-ever record over the replicates; ties go to the first replicate."""
    best = None
    for history in histories.values():
        record = history.best_ever
        if best is None or record.best_fitness > best.best_fitness:
            best = record
    return best


class CrossStrategyMatrix(object):
    """
    # Attributes
        strategies : list of str
        values : array, shape of (N, N)
            values[i, j] = fitness of the champion trained on strategies[j] deployed in strategies[i]
    """

    def __init__(self, strategies, values):
        values = np.asarray(values, dtype=np.float64)
        if values.shape != (len(strategies), len(strategies)):
            raise ValueError("matrix must be {0}x{0}, got shape {1}".format(len(strategies), values.shape))
        if (values < 0).any():
            raise ValueError("fitness entries must be >= 0")
        self.strategies = list(strategies)
        self.values = values

    def entry(self, deployed, trained):
        return self.values[self.strategies.index(deployed), self.strategies.index(trained)]

    def diagonal_dominant(self):
        """True when every diagonal entry is the strict maximum of its row."""
        for i, row in enumerate(self.values):
            others = np.delete(row, i)
            if others.size and not row[i] > others.max():
                return False
        return True


def cross_evaluate(champions, scenarios, topology, seed):
    """
    # Args
        champions : dict, training strategy -> chromosome
        scenarios : dict, strategy -> Scenario
        topology : Topology
        seed : int, fixed evaluation seed

    # Returns
        matrix : CrossStrategyMatrix
    """
    names = list(champions)
    missing = [n for n in names if n not in scenarios]
    if missing:
        raise ValueError("no scenario for strategies {}".format(missing))
    values = np.zeros((len(names), len(names)))
    for i, deployed in enumerate(names):
        scenario = training_scenario(scenarios[deployed])
        for j, trained in enumerate(names):
            values[i, j] = evaluate_chromosome(champions[trained], scenario, topology, seed).fitness
    return CrossStrategyMatrix(names, values)


@dataclass
class IncrementalRecord:
    iteration: int
    strategies: tuple
    fitnesses: tuple
    generations: int
    converged: bool
    best_chromosome: np.ndarray = None

    @property
    def mean(self):
        return float(np.mean(self.fitnesses))


def incremental_evolution(spec, seed, workers=1, verbosity=1, executor=None, label="incremental"):
    """One incremental run: strategy k joins once the best chromosome meets the
    acceptance criterion on all of strategies 1..k-1.

    The GA state carries over between iterations. With a single strategy this is
    the individual-ca run on it, stopped at the first accepted generation.

    # Returns
        records : list of IncrementalRecord
        history : EvolutionHistory, generations numbered across iterations
    """
    names = list(spec.scenarios)
    target = ACCEPTANCE_FRACTION * spec.acceptance_threshold
    ga = GeneticAlgorithm(spec.ga, spec.topology, seed)
    history = EvolutionHistory(spec.topology, seed)
    records = []
    for k in range(1, len(names) + 1):
        active = names[:k]
        scenarios = [training_scenario(spec.scenarios[n]) for n in active]
        fitness_fn = ScenarioFitness(scenarios, spec.topology, spec.evaluation_seed)
        progress = _Progress("{} iteration {}".format(label, k), spec.generation_budget, verbosity,
                             scenarios, spec.topology, spec.evaluation_seed)
        converged = False
        for used in range(1, spec.generation_budget + 1):
            individuals = ga.evaluate(fitness_fn, workers, executor)
            history.add(ga.generation, individuals)
            progress(history.records[-1])
            best = history.records[-1].best_chromosome
            per_strategy = fitness_fn.per_scenario(best)
            converged = all(f > target for f in per_strategy)
            if converged:
                break
            ga.advance(individuals)
        progress.close()
        records.append(IncrementalRecord(k, tuple(active), tuple(float(f) for f in per_strategy),
                                         used, converged, best.copy()))
        if not converged:
            break
        if k < len(names):
            ga.advance(individuals)
    return records, history


def run_incremental(spec, workers=1, verbosity=1):
    """
    # Returns
        runs : dict, replicate -> (records, history)
    """
    runs = {}
    with worker_pool(workers) as executor:
        for replicate in spec.replicates:
            runs[replicate] = incremental_evolution(spec, spec.run_seed(replicate), workers, verbosity, executor,
                                                    label="incremental seed {}".format(replicate))
    return runs


def _controllers(scenario, chromosomes, topology, seed):
    ids = learner_ids(scenario)
    if len(chromosomes) != len(ids):
        raise ValueError("scenario {!r} has {} network-controlled vehicles but {} chromosomes were given".format(
            scenario.name, len(ids), len(chromosomes)))
    if topology.n_inputs != scenario.sensor.beam_count:
        raise ValueError("network input size {} does not match sensor beam_count {}".format(
            topology.n_inputs, scenario.sensor.beam_count))
    networks = dict(zip(ids, (decode(c, topology) for c in chromosomes)))
    controllers = []
    for i in range(scenario.n_vehicles):
        if i in networks:
            controllers.append(NetworkController(networks[i], scenario.sensor, scenario.max_steering))
        else:
            controllers.append(StrategyController(scenario.opponents[i - 1].strategy, seed))
    return controllers


def _responsible_collisions(report, world):
    """Events at least one vehicle is responsible for, and the vehicles taking part in them.

    A scripted vehicle's wall reflection is part of its strategy and is not a collision.
    """
    count = 0
    involved = set()
    for event, parties in report.blame:
        if not parties:
            continue
        if event.kind != VEHICLE and getattr(world.controllers[event.participants[0]], "bounces", False):
            continue
        count += 1
        involved |= set(event.participants)
    return count, involved


def measure_collision_rate(chromosomes, scenario, topology, duration_steps, seed):
    """Collisions per second of a closed world, counting every event some vehicle is responsible for.

    # Args
        chromosomes : list of arrays, one per network-driven vehicle (ego first)
        scenario : Scenario
        topology : Topology
        duration_steps : int
        seed : int, seeds the scripted opponents

    # Returns
        measurement : CollisionMeasurement
    """
    world = World(scenario, _controllers(scenario, chromosomes, topology, seed))
    count = 0
    for _ in range(duration_steps):
        n, involved = _responsible_collisions(world.step(), world)
        count += n
        for i in sorted(involved):
            world.respawn(i)
    return collision_rate(count, duration_steps, scenario.dt)


def initial_chromosomes(spec, count, topology):
    """Untrained chromosomes for the before-learning measurement, from a fixed stream."""
    low, high = spec.ga.init_weight_range
    rng = make_rng(spec.evaluation_seed, _BEFORE_STREAM)
    return list(rng.uniform(low, high, size=(count, chromosome_length(topology))))


def _check_chromosome(chromosome, topology):
    if len(chromosome) != chromosome_length(topology):
        raise ValueError("chromosome length mismatch: expected {}, got {}".format(
            chromosome_length(topology), len(chromosome)))


def run_broadcast_champion(spec, chromosome, verbosity=1):
    """Every network vehicle runs a random initial chromosome, then the champion.

    # Returns
        report : CollisionRateReport
    """
    _check_chromosome(chromosome, spec.topology)
    report = CollisionRateReport()
    for name, scenario in spec.scenarios.items():
        n = len(learner_ids(scenario))
        before = measure_collision_rate(initial_chromosomes(spec, n, spec.topology), scenario, spec.topology,
                                        spec.measure_steps, spec.evaluation_seed)
        after = measure_collision_rate([chromosome] * n, scenario, spec.topology,
                                       spec.measure_steps, spec.evaluation_seed)
        report.add(name, before.rate, after.rate)
        if verbosity >= 1:
            tqdm.write("[{}] champion broadcast: {:.3f} -> {:.3f} collisions/s".format(name, before.rate, after.rate))
    return report


class _LifetimeLearner(object):
    """One vehicle's GA evaluated in a shared world: each chromosome drives until
    its own responsible collision, a spin or max_steps; the steps survived are its fitness."""

    def __init__(self, index, controller, ga, spin, max_steps):
        self.index = index
        self._controller = controller
        self._ga = ga
        self._monitor = SpinMonitor(spin)
        self._max_steps = max_steps
        self._scored = []
        self._lifetime = 0
        self.best = Individual(ga.population[0].copy(), -1.0)
        self._load()

    @property
    def generation(self):
        return self._ga.generation

    def _load(self):
        self._controller.network = decode(self._ga.population[len(self._scored)], self._controller.network.topology)
        self._lifetime = 0
        self._monitor.reset()

    def finish(self, fitness):
        chromosome = self._ga.population[len(self._scored)]
        self._scored.append(Individual(chromosome, float(fitness)))
        if fitness > self.best.fitness:
            self.best = Individual(chromosome.copy(), float(fitness))
        if len(self._scored) == len(self._ga.population):
            check_fitnesses([ind.fitness for ind in self._scored], self._ga.generation)
            self._ga.advance(self._scored)
            self._scored = []
        self._load()

    def observe(self, state, responsible):
        """
        # Returns
            respawn : bool
        """
        if responsible:
            self.finish(self._lifetime)
            return True
        self._lifetime += 1
        if self._monitor.update(state):
            self.finish(0)
            return True
        if self._lifetime >= self._max_steps:
            self.finish(self._lifetime)
        return False

    def respawned(self):
        """Moved back to its start by a collision it did not cause; the chromosome keeps driving."""
        self._monitor.reset()


def evolve_in_shared_world(spec, scenario, population, seed):
    """Per-vehicle GAs continued from copies of population, all scored together.

    # Returns
        best : list of arrays, each learner's best scored chromosome (ego first)
    """
    ids = learner_ids(scenario)
    for c in population:
        _check_chromosome(c, spec.topology)
    population = [np.array(c, dtype=np.float64) for c in population]
    ga_config = replace(spec.ga, population_size=len(population)).validate()
    world = World(scenario, _controllers(scenario, [population[0]] * len(ids), spec.topology, seed))
    learners = {}
    for k, i in enumerate(ids):
        ga = GeneticAlgorithm(ga_config, spec.topology, derive_seed(seed, _LEARNER_STREAM, k),
                              [c.copy() for c in population])
        learners[i] = _LifetimeLearner(i, world.controllers[i], ga, scenario.spin, scenario.max_steps)

    for _ in range(spec.training_steps):
        report = world.step()
        responsible = responsible_ids(report)
        _, involved = _responsible_collisions(report, world)
        for i in ids:
            if learners[i].observe(world.states[i], i in responsible):
                involved.add(i)
            elif i in involved:
                learners[i].respawned()
        for i in sorted(involved):
            world.respawn(i)
    return [learners[i].best.chromosome for i in ids]


def run_broadcast_population(spec, population, verbosity=1):
    """Each network vehicle keeps evolving its own copy of population in the shared world,
    then drives its best chromosome for the after-learning measurement.

    # Returns
        report : CollisionRateReport
    """
    report = CollisionRateReport()
    for name, scenario in spec.scenarios.items():
        n = len(learner_ids(scenario))
        before = measure_collision_rate(initial_chromosomes(spec, n, spec.topology), scenario, spec.topology,
                                        spec.measure_steps, spec.evaluation_seed)
        best = evolve_in_shared_world(spec, scenario, population, spec.evaluation_seed)
        after = measure_collision_rate(best, scenario, spec.topology, spec.measure_steps, spec.evaluation_seed)
        report.add(name, before.rate, after.rate)
        if verbosity >= 1:
            tqdm.write("[{}] population broadcast: {:.3f} -> {:.3f} collisions/s".format(
                name, before.rate, after.rate))
    return report


def evaluate_champion(chromosome, scenarios, topology, seed, trace=False):
    """Deploy one chromosome as the ego in each scenario, including ones it never trained on.

    # Returns
        results : dict, scenario name -> EvaluationResult
    """
    _check_chromosome(chromosome, topology)
    results = {}
    for name, scenario in scenarios.items():
        results[name] = evaluate_chromosome(chromosome, training_scenario(scenario), topology, seed, trace=trace)
    return results
