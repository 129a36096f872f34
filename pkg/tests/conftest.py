# -*- coding: utf-8 -*-

import json
import math

import pytest

from evocar.backend.sensor import RangefinderConfig
from evocar.backend.strategy import StrategySpec
from evocar.backend.utils.track import Environment, build_arena, bundled_track
from evocar.backend.vehicle import VehicleState
from evocar.backend.world import Opponent, Scenario


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False,
                     help="also run the long learning experiments")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long learning experiment, needs --runslow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(scope='module')
def setup_open_scenario():
    """Ego alone in an unbounded world."""
    return Scenario(Environment([]), VehicleState(0., 0., 0.), max_steps=300, name="open")


@pytest.fixture(scope='module')
def setup_track_scenario():
    environment, (x, y, heading) = bundled_track("wide")
    return Scenario(environment, VehicleState(x, y, heading), max_steps=200, name="wide")


@pytest.fixture(scope='module')
def setup_arena_scenario():
    """Ego plus four random-turn opponents in a 60 m square arena."""
    opponents = tuple(Opponent(VehicleState(x, y, heading), StrategySpec("random-turns", seed_offset=k))
                      for k, (x, y, heading) in enumerate([(50., 10., math.pi / 2), (50., 50., math.pi),
                                                           (10., 50., -math.pi / 2), (30., 30., 0.)], 1))
    return Scenario(build_arena(60., 60.), VehicleState(10., 10., 0.), opponents,
                    sensor=RangefinderConfig(5), max_steps=300, name="arena")


@pytest.fixture(scope='function')
def setup_config_writer(tmp_path):
    """Writes a config dict to a json file and returns its path."""
    def write(config, fname="config.json"):
        path = tmp_path / fname
        path.write_text(json.dumps(config, indent=2))
        return str(path)
    return write


@pytest.fixture(scope='function')
def setup_small_navigation_config():
    return {"experiment": {"kind": "navigation", "name": "tiny", "generations": 3, "seeds": [0], "seed": 7},
            "ga": {"population_size": 8, "tournament_size": 2},
            "simulation": {"max_steps": 60},
            "environment": {"track": "wide"}}


@pytest.fixture(scope='function')
def setup_small_arena_config():
    return {"experiment": {"kind": "individual-ca", "name": "tiny_ca", "generations": 2, "seeds": [0], "seed": 3},
            "ga": {"population_size": 6, "tournament_size": 2},
            "simulation": {"max_steps": 80},
            "environment": {"arena": [60.0, 60.0]},
            "opponents": {"count": 4, "margin": 6.0},
            "strategies": [{"name": "straight", "kind": "bounce-straight"},
                           {"name": "random", "kind": "random-turns"}]}
