# -*- coding: utf-8 -*-
import math
import time
from concurrent.futures import ProcessPoolExecutor


class FitnessError(RuntimeError):
    pass


def _call(job):
    fitness_fn, chromosome, seed = job
    return fitness_fn(chromosome, seed)


def evaluate_population(fitness_fn, chromosomes, seeds, workers=1, executor=None):
    """Score every chromosome; results keep population order whatever the worker count.

    # Args
        fitness_fn : callable (chromosome, seed) -> float
            must be picklable when workers > 1
        chromosomes : list of arrays
        seeds : list of ints, one derived seed per chromosome
        workers : int
        executor : concurrent.futures.Executor or None
            reused pool; when None and workers > 1 a pool is created for this call

    # Returns
        fitnesses : list of floats
    """
    jobs = [(fitness_fn, c, s) for c, s in zip(chromosomes, seeds)]
    if executor is not None:
        fitnesses = list(executor.map(_call, jobs, chunksize=_chunksize(len(jobs), workers)))
    elif workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            fitnesses = list(pool.map(_call, jobs, chunksize=_chunksize(len(jobs), workers)))
    else:
        fitnesses = [_call(job) for job in jobs]
    return [float(f) for f in fitnesses]


def check_fitnesses(fitnesses, generation):
    for i, f in enumerate(fitnesses):
        if not math.isfinite(f) or f < 0:
            raise FitnessError("fitness function returned {!r} for individual {} of generation {}; "
                               "fitness must be finite and non-negative".format(f, i, generation))


def _chunksize(n_jobs, workers):
    return max(1, n_jobs // (4 * max(1, workers)))


class Stopwatch(object):
    def __init__(self):
        self._start = time.time()

    def elapsed(self):
        return time.time() - self._start

    def summary(self, what="to run"):
        return format_time(self.elapsed(), what)


def format_time(process_time, what="to run"):
    if process_time < 60:
        return "{:d}-seconds {}".format(int(process_time), what)
    else:
        return "{:d}-mins {}".format(int(process_time / 60), what)
