# -*- coding: utf-8 -*-
# Result files. Every file opens with a provenance header
#     # evocar <version> config_sha256=<hex> seed=<master seed>
# followed by optional '#' metadata lines and the CSV (or gene) body.

import contextlib
import csv
import os
import tempfile

import numpy as np

from evocar._version import __version__
from evocar.backend.network import Topology, chromosome_length
from evocar.backend.utils.eval.rates import reduction


def file_header(config_hash, seed, metadata=()):
    lines = ["# evocar {} config_sha256={} seed={}".format(__version__, config_hash, seed)]
    lines.extend("# {}".format(m) for m in metadata)
    return lines


@contextlib.contextmanager
def atomic_write(path, mode="w"):
    """Yields a file handle; the file appears at path only if the block completes."""
    dirname = os.path.dirname(os.path.abspath(path))
    if not os.path.isdir(dirname):
        os.makedirs(dirname)
    options = {} if "b" in mode else {"newline": ""}
    handle = tempfile.NamedTemporaryFile(mode, dir=dirname, prefix=".tmp-", suffix=".part", delete=False, **options)
    try:
        with handle:
            yield handle
        os.replace(handle.name, path)
    except BaseException:
        if os.path.exists(handle.name):
            os.remove(handle.name)
        raise


def _cell(value):
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (np.integer,)):
        return str(int(value))
    return "" if value is None else str(value)


class ResultWriter(object):
    """Writes the run's output files under one directory with a shared header.

    # Args
        out_dir : str
        config_hash : str, sha256 of the config file text
        seed : int, master seed
    """

    def __init__(self, out_dir, config_hash, seed):
        self.out_dir = out_dir
        self._config_hash = config_hash
        self._seed = seed
        self.written = []

    def path(self, fname):
        return os.path.join(self.out_dir, fname)

    def _table(self, fname, columns, rows, metadata=()):
        path = self.path(fname)
        with atomic_write(path) as f:
            for line in file_header(self._config_hash, self._seed, metadata):
                f.write(line + "\n")
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(columns)
            for row in rows:
                writer.writerow([_cell(v) for v in row])
        self.written.append(path)
        return path

    def curves(self, run, history):
        return self._table("curves_{}.csv".format(run),
                           ["generation", "best_fitness", "mean_fitness"],
                           history.rows(),
                           ["run={} run_seed={} topology={}".format(run, history.seed,
                                                                     history.topology.layer_sizes)])

    def weights(self, run, chromosome, topology, fitness=None):
        path = self.path("champion_{}.weights".format(run))
        metadata = ["topology {}".format(" ".join(str(n) for n in topology.layer_sizes))]
        if fitness is not None:
            metadata.append("fitness {}".format(_cell(float(fitness))))
        with atomic_write(path) as f:
            for line in file_header(self._config_hash, self._seed, metadata):
                f.write(line + "\n")
            for gene in np.asarray(chromosome, dtype=np.float64):
                f.write("%.17g\n" % gene)
        self.written.append(path)
        return path

    def population(self, run, chromosomes, topology):
        return self._table("population_{}.csv".format(run),
                           ["gene{}".format(k) for k in range(len(chromosomes[0]))],
                           [["%.17g" % g for g in c] for c in chromosomes],
                           ["topology {}".format(" ".join(str(n) for n in topology.layer_sizes))])

    def matrix(self, matrix):
        rows = [[name] + list(values) for name, values in zip(matrix.strategies, matrix.values)]
        return self._table("matrix.csv", ["deployed\\trained"] + list(matrix.strategies), rows,
                           ["rows: deployment strategy, columns: training strategy"])

    def incremental(self, runs, strategies):
        """
        # Args
            runs : dict, run label -> list of IncrementalRecord
            strategies : list of str, in the order they join
        """
        rows = []
        for run, records in runs.items():
            for record in records:
                cells = [record.fitnesses[k] if k < len(record.fitnesses) else None for k in range(len(strategies))]
                rows.append([run, record.iteration, record.generations, int(record.converged)] + cells + [record.mean])
        return self._table("incremental.csv",
                           ["run", "iteration", "generations", "converged"] + list(strategies) + ["mean"], rows)

    def rates(self, report, fname="rates.csv", metadata=()):
        return self._table(fname, ["strategy", "before", "after", "reduction"],
                           [(r.strategy, r.before, r.after, reduction(r.before, r.after))
                            for r in report.rows], metadata)

    def trace(self, run, rows):
        return self._table("trace_{}.csv".format(run), ["step", "id", "x", "y", "heading"], rows)


def _read_header(lines, path):
    topology = None
    body = []
    for n, line in enumerate(lines, 1):
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            fields = line[1:].split()
            if fields and fields[0] == "topology":
                try:
                    topology = Topology([int(v) for v in fields[1:]])
                except ValueError as e:
                    raise ValueError("{}:{}: bad topology line ({})".format(path, n, e))
            continue
        body.append((n, line))
    if topology is None:
        raise ValueError("{}: missing '# topology ...' header line".format(path))
    return topology, body


def read_weights(path):
    """
    # Returns
        chromosome : array
        topology : Topology
    """
    with open(path) as f:
        topology, body = _read_header(f.readlines(), path)
    genes = []
    for n, line in body:
        try:
            genes.append(float(line))
        except ValueError:
            raise ValueError("{}:{}: expected one number per line, got {!r}".format(path, n, line))
    if len(genes) != chromosome_length(topology):
        raise ValueError("{}: topology {} needs {} genes, file has {}".format(
            path, topology.layer_sizes, chromosome_length(topology), len(genes)))
    return np.array(genes), topology


def read_population(path):
    """
    # Returns
        population : list of arrays
        topology : Topology
    """
    with open(path) as f:
        topology, body = _read_header(f.readlines(), path)
    population = []
    for n, line in body[1:]:
        row = np.array([float(v) for v in line.split(",")])
        if row.size != chromosome_length(topology):
            raise ValueError("{}:{}: expected {} genes, got {}".format(path, n, chromosome_length(topology), row.size))
        population.append(row)
    return population, topology
