# -*- coding: utf-8 -*-
import csv
import os

import numpy as np
import pytest

from evocar._version import __version__
from evocar.backend.evolution import EvolutionHistory, Individual
from evocar.backend.network import chromosome_length, create_topology
from evocar.backend.utils.eval.rates import CollisionRateReport
from evocar.backend.utils.report import ResultWriter, atomic_write, read_population, read_weights

TOPOLOGY = create_topology(3, (4,))


@pytest.fixture(scope='function')
def setup_writer(tmp_path):
    return ResultWriter(str(tmp_path / "out"), "ab" * 32, 17)


def _body(path):
    with open(path) as f:
        return list(csv.reader(line for line in f if not line.startswith("#")))


def test_atomic_write_leaves_nothing_on_failure(tmp_path):
    path = str(tmp_path / "partial.csv")
    with pytest.raises(RuntimeError):
        with atomic_write(path) as f:
            f.write("half a row")
            raise RuntimeError("interrupted")
    assert os.listdir(str(tmp_path)) == []


def test_atomic_write_creates_missing_directories(tmp_path):
    path = str(tmp_path / "a" / "b" / "done.txt")
    with atomic_write(path) as f:
        f.write("ok\n")
    assert open(path).read() == "ok\n"
    assert os.listdir(str(tmp_path / "a" / "b")) == ["done.txt"]


def test_every_file_starts_with_the_provenance_header(setup_writer):
    history = EvolutionHistory(TOPOLOGY, seed=5)
    genes = np.zeros(chromosome_length(TOPOLOGY))
    history.add(0, [Individual(genes, 3.), Individual(genes, 1.)])
    history.add(1, [Individual(genes, 4.), Individual(genes, 4.)])
    path = setup_writer.curves("tiny_seed0", history)

    assert os.path.basename(path) == "curves_tiny_seed0.csv"
    first = open(path).readline().rstrip("\n")
    assert first == "# evocar {} config_sha256={} seed=17".format(__version__, "ab" * 32)
    assert _body(path) == [["generation", "best_fitness", "mean_fitness"],
                           ["0", "3.0", "2.0"],
                           ["1", "4.0", "4.0"]]
    assert setup_writer.written == [path]


def test_weights_read_back_exactly(setup_writer):
    chromosome = np.random.default_rng(0).normal(size=chromosome_length(TOPOLOGY)) * 1e3
    path = setup_writer.weights("best", chromosome, TOPOLOGY, fitness=812.)
    loaded, topology = read_weights(path)
    assert topology == TOPOLOGY
    assert np.array_equal(loaded, chromosome)


def test_population_reads_back_exactly(setup_writer):
    population = list(np.random.default_rng(1).uniform(-1, 1, size=(4, chromosome_length(TOPOLOGY))))
    loaded, topology = read_population(setup_writer.population("final", population, TOPOLOGY))
    assert topology == TOPOLOGY
    assert len(loaded) == 4
    assert all(np.array_equal(a, b) for a, b in zip(loaded, population))


def test_rates_table(setup_writer):
    report = CollisionRateReport()
    report.add("random", 0.5, 0.1)
    report.add("straight", 0., 0.)
    rows = _body(setup_writer.rates(report))
    assert rows[0] == ["strategy", "before", "after", "reduction"]
    assert rows[1] == ["random", "0.5", "0.1", "0.8"]
    assert rows[2] == ["straight", "0.0", "0.0", "0.0"]


def test_weights_without_topology(tmp_path):
    path = tmp_path / "bare.weights"
    path.write_text("0.5\n0.25\n")
    with pytest.raises(ValueError, match="missing '# topology"):
        read_weights(str(path))


def test_weights_with_a_bad_gene(tmp_path):
    path = tmp_path / "bad.weights"
    path.write_text("# topology 3 4 2\n0.5\nnan-ish\n")
    with pytest.raises(ValueError, match="bad.weights:3: expected one number per line"):
        read_weights(str(path))


def test_weights_with_the_wrong_gene_count(tmp_path):
    path = tmp_path / "short.weights"
    path.write_text("# topology 3 4 2\n" + "0.1\n" * 5)
    with pytest.raises(ValueError, match=r"needs 26 genes, file has 5"):
        read_weights(str(path))


if __name__ == '__main__':
    pytest.main([__file__, "-v", "-s"])
