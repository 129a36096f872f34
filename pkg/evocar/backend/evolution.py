# -*- coding: utf-8 -*-
# Generational genetic algorithm over flat weight chromosomes.
#
# Children always replace their parents (no elitism); the best chromosome
# ever seen is tracked by EvolutionHistory instead.

from collections import namedtuple
from dataclasses import dataclass

import numpy as np

from evocar.backend.network import chromosome_length
from evocar.backend.utils.fit import evaluate_population, check_fitnesses
from evocar.backend.utils.seeding import derive_seed, make_rng

_INIT_STREAM = 0
_BREED_STREAM = 1


@dataclass(frozen=True)
class GAConfig:
    population_size: int = 200
    mutation_probability: float = 0.1
    crossover_probability: float = 1.0
    crossover_site_mean: float = 0.95
    crossover_site_stddev: float = 0.05
    tournament_size: int = 10
    init_weight_range: tuple = (-1.0, 1.0)
    mutation_sigma: float = 0.3

    def check(self):
        """
        # Returns
            errors : list of strings, empty when the configuration is valid
        """
        errors = []
        if self.tournament_size < 1:
            errors.append("tournament_size must be >= 1, got {}".format(self.tournament_size))
        if self.population_size % 2 != 0:
            errors.append("population_size must be even, got {}".format(self.population_size))
        if self.population_size < 2 * self.tournament_size:
            errors.append("population_size must be >= 2 * tournament_size ({}), got {}".format(
                2 * self.tournament_size, self.population_size))
        for name in ("mutation_probability", "crossover_probability"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                errors.append("{} must be in [0, 1], got {}".format(name, p))
        if not self.crossover_site_stddev > 0:
            errors.append("crossover_site_stddev must be > 0, got {}".format(self.crossover_site_stddev))
        if self.mutation_sigma < 0:
            errors.append("mutation_sigma must be >= 0, got {}".format(self.mutation_sigma))
        low, high = self.init_weight_range
        if low > high:
            errors.append("init_weight_range must be [low, high] with low <= high, got {}".format(
                list(self.init_weight_range)))
        return errors

    def validate(self):
        errors = self.check()
        if errors:
            raise ValueError("invalid GA configuration: " + "; ".join(errors))
        return self


@dataclass
class Individual:
    chromosome: np.ndarray
    fitness: float


GenerationRecord = namedtuple("GenerationRecord", ["generation", "best_fitness", "mean_fitness", "best_chromosome"])


class EvolutionHistory(object):
    """Per-generation learning-curve records of one GA run."""

    def __init__(self, topology, seed):
        self.topology = topology
        self.seed = seed
        self.records = []
        self.final_population = []

    def add(self, generation, individuals):
        fitnesses = np.array([ind.fitness for ind in individuals])
        best = int(np.argmax(fitnesses))
        self.records.append(GenerationRecord(generation,
                                             float(fitnesses[best]),
                                             float(fitnesses.mean()),
                                             individuals[best].chromosome.copy()))
        self.final_population = [ind.chromosome.copy() for ind in individuals]

    @property
    def best_ever(self):
        best = self.records[0]
        for record in self.records[1:]:
            if record.best_fitness > best.best_fitness:
                best = record
        return best

    def best_fitness(self):
        return np.array([r.best_fitness for r in self.records])

    def mean_fitness(self):
        return np.array([r.mean_fitness for r in self.records])

    def rows(self):
        return [(r.generation, r.best_fitness, r.mean_fitness) for r in self.records]

    def __len__(self):
        return len(self.records)


def initialize_population(config, topology, seed):
    """
    # Returns
        population : list of arrays, genes i.i.d. uniform over init_weight_range
    """
    low, high = config.init_weight_range
    rng = make_rng(seed, _INIT_STREAM)
    genes = rng.uniform(low, high, size=(config.population_size, chromosome_length(topology)))
    return [row.copy() for row in genes]


def tournament_select(population, config, rng):
    """Fittest of tournament_size distinct individuals; ties go to the lowest index."""
    k = config.tournament_size
    if k > len(population):
        raise ValueError("tournament_size {} exceeds population size {}".format(k, len(population)))
    candidates = np.sort(rng.choice(len(population), size=k, replace=False))
    fitnesses = np.array([population[i].fitness for i in candidates])
    return population[candidates[int(np.argmax(fitnesses))]]


def crossover_site(fraction, length):
    fraction = min(max(fraction, 0.0), 1.0)
    site = int(np.rint(fraction * length))
    return min(max(site, 1), length - 1)


def splice(parent_a, parent_b, site):
    child_1 = np.concatenate([parent_a[:site], parent_b[site:]])
    child_2 = np.concatenate([parent_b[:site], parent_a[site:]])
    return child_1, child_2


def crossover(parent_a, parent_b, config, rng):
    """Single-point crossover with a normally distributed site (fraction of the length)."""
    parent_a = np.asarray(parent_a, dtype=np.float64)
    parent_b = np.asarray(parent_b, dtype=np.float64)
    if parent_a.shape != parent_b.shape:
        raise ValueError("parents differ in length: {} vs {}".format(parent_a.size, parent_b.size))
    if parent_a.size < 2:
        raise ValueError("crossover needs chromosomes of length >= 2, got {}".format(parent_a.size))

    if rng.random() < config.crossover_probability:
        fraction = rng.normal(config.crossover_site_mean, config.crossover_site_stddev)
        return splice(parent_a, parent_b, crossover_site(fraction, parent_a.size))
    return parent_a.copy(), parent_b.copy()


def mutate(chromosome, config, rng):
    """Adds Normal(0, mutation_sigma) noise to each gene with probability mutation_probability."""
    chromosome = np.array(chromosome, dtype=np.float64)
    mask = rng.random(chromosome.size) < config.mutation_probability
    noise = rng.normal(0.0, config.mutation_sigma, size=chromosome.size)
    chromosome[mask] += noise[mask]
    return chromosome


def next_generation(population, config, rng):
    """
    # Args
        population : list of Individual, fitness assigned

    # Returns
        children : list of population_size arrays
    """
    children = []
    while len(children) < config.population_size:
        parent_a = tournament_select(population, config, rng)
        parent_b = tournament_select(population, config, rng)
        child_1, child_2 = crossover(parent_a.chromosome, parent_b.chromosome, config, rng)
        children.append(mutate(child_1, config, rng))
        if len(children) < config.population_size:
            children.append(mutate(child_2, config, rng))
    return children


class GeneticAlgorithm(object):
    """Step-wise GA so callers can change the fitness function between generations."""

    def __init__(self, config, topology, seed, population=None):
        self._config = config.validate()
        self._topology = topology
        self._seed = seed
        self._rng = make_rng(seed, _BREED_STREAM)
        self.generation = 0
        if population is None:
            self.population = initialize_population(config, topology, seed)
        else:
            self.population = self._adopt(population)

    @property
    def config(self):
        return self._config

    def evaluate(self, fitness_fn, workers=1, executor=None):
        """
        # Returns
            individuals : list of Individual for the current generation
        """
        seeds = [derive_seed(self._seed, self.generation, i) for i in range(len(self.population))]
        fitnesses = evaluate_population(fitness_fn, self.population, seeds, workers, executor)
        check_fitnesses(fitnesses, self.generation)
        return [Individual(c, f) for c, f in zip(self.population, fitnesses)]

    def advance(self, individuals):
        self.population = next_generation(individuals, self._config, self._rng)
        self.generation += 1

    def _adopt(self, population):
        length = chromosome_length(self._topology)
        adopted = []
        for c in population:
            c = np.array(c, dtype=np.float64)
            if c.shape != (length,):
                raise ValueError("population chromosome length mismatch: expected {}, got {}".format(
                    length, c.size))
            adopted.append(c)
        if len(adopted) != self._config.population_size:
            raise ValueError("population has {} chromosomes, configuration expects {}".format(
                len(adopted), self._config.population_size))
        return adopted


def evolve(fitness_fn,
           config,
           topology,
           generations,
           seed,
           workers=1,
           initial_population=None,
           callback=None,
           executor=None):
    """Run the GA: initialize, then {evaluate all, record, breed} per generation.

    # Args
        fitness_fn : callable (chromosome, seed) -> non-negative float
            seed is derived from (seed, generation, individual index)
        config : GAConfig
        topology : Topology
        generations : int >= 1
        seed : int
        callback : callable (GenerationRecord) or None

    # Returns
        history : EvolutionHistory
    """
    if generations < 1:
        raise ValueError("generations must be >= 1, got {}".format(generations))
    ga = GeneticAlgorithm(config, topology, seed, initial_population)
    history = EvolutionHistory(topology, seed)
    for generation in range(generations):
        individuals = ga.evaluate(fitness_fn, workers, executor)
        history.add(generation, individuals)
        if callback is not None:
            callback(history.records[-1])
        if generation + 1 < generations:
            ga.advance(individuals)
    return history
