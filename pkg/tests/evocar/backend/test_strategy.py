# -*- coding: utf-8 -*-
import math

import pytest

from evocar.backend.strategy import StrategySpec, reflect_heading, strategy_step
from evocar.backend.vehicle import VehicleState, steering_for_radius


def test_bounce_straight_never_steers():
    spec = StrategySpec("bounce-straight")
    assert all(strategy_step(spec, VehicleState(0., 0.), step, 5) == 0.0 for step in range(100))


def test_circling_steers_to_its_radius():
    spec = StrategySpec("circling", circle_radius=15.)
    vehicle = VehicleState(3., 4., 1.)
    assert strategy_step(spec, vehicle, 17, 0) == pytest.approx(math.atan(vehicle.wheelbase / 15.))
    assert strategy_step(spec, vehicle, 17, 0) == steering_for_radius(vehicle.wheelbase, 15.)


def test_random_turns_hold_between_intervals():
    spec = StrategySpec("random-turns", turn_interval=10, turn_magnitude=0.3)
    vehicle = VehicleState(0., 0.)
    first = [strategy_step(spec, vehicle, step, 8) for step in range(10)]
    assert len(set(first)) == 1
    assert abs(first[0]) <= 0.3
    angles = {strategy_step(spec, vehicle, step, 8) for step in range(0, 200, 10)}
    assert len(angles) > 1


def test_strategies_are_deterministic_given_seed():
    spec = StrategySpec("random-turns", seed_offset=3)
    vehicle = VehicleState(1., 1., 0.2)
    assert strategy_step(spec, vehicle, 57, 11) == strategy_step(spec, vehicle, 57, 11)
    assert strategy_step(spec, vehicle, 57, 11) != strategy_step(spec.with_offset(4), vehicle, 57, 11)


def test_waypoint_patrol_on_course_does_not_steer():
    spec = StrategySpec("waypoint-patrol", waypoints=[(10., 0.), (10., 10.)], turn_interval=50)
    assert strategy_step(spec, VehicleState(0., 0., 0.), 0, 0) == pytest.approx(0.0)


def test_waypoint_patrol_turns_toward_target_and_saturates():
    spec = StrategySpec("waypoint-patrol", waypoints=[(0., 10.)], gain=1.0, max_steering=0.4)
    assert strategy_step(spec, VehicleState(0., 0., 0.), 0, 0) == pytest.approx(0.4)
    assert strategy_step(spec, VehicleState(0., 0., math.pi / 2 + 0.1), 0, 0) == pytest.approx(-0.1)


def test_waypoint_patrol_cycles_with_offset():
    spec = StrategySpec("waypoint-patrol", waypoints=[(10., 0.), (0., 10.)], turn_interval=5)
    vehicle = VehicleState(0., 0., 0.)
    assert strategy_step(spec, vehicle, 4, 0) == pytest.approx(0.0)
    assert strategy_step(spec, vehicle, 5, 0) > 0
    assert strategy_step(spec.with_offset(1), vehicle, 0, 0) > 0


@pytest.mark.parametrize("heading, wall, expected", [(0.3, (5., -1., 5., 1.), math.pi - 0.3),
                                                     (0.3, (-1., 5., 1., 5.), -0.3),
                                                     (-2.0, (-1., 0., 1., 0.), 2.0)])
def test_reflect_heading(heading, wall, expected):
    assert reflect_heading(heading, wall) == pytest.approx(expected)


@pytest.mark.parametrize("kwargs", [{"kind": "zigzag"}, {"kind": "circling", "circle_radius": 0.},
                                    {"kind": "waypoint-patrol"}, {"kind": "random-turns", "turn_interval": 0}])
def test_invalid_strategy_is_rejected(kwargs):
    with pytest.raises(ValueError):
        StrategySpec(**kwargs)


if __name__ == '__main__':
    pytest.main([__file__, "-v", "-s"])
