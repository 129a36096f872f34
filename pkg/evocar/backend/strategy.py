# -*- coding: utf-8 -*-
# Scripted movement policies for uncontrolled vehicles.
#
# A policy output depends only on (vehicle state, step index, seed), so a
# world rebuilt from the same scenario and seed replays identically.

import math
from dataclasses import dataclass, replace

import numpy as np

from evocar.backend.utils.geometry import normalize_angle
from evocar.backend.utils.seeding import make_rng
from evocar.backend.vehicle import steering_for_radius

BOUNCE_STRAIGHT = "bounce-straight"
RANDOM_TURNS = "random-turns"
CIRCLING = "circling"
WAYPOINT_PATROL = "waypoint-patrol"
STRATEGY_KINDS = (BOUNCE_STRAIGHT, RANDOM_TURNS, CIRCLING, WAYPOINT_PATROL)


@dataclass(frozen=True)
class StrategySpec:
    kind: str
    turn_interval: int = 40
    turn_magnitude: float = math.radians(20.0)
    circle_radius: float = 15.0
    waypoints: tuple = ()
    gain: float = 1.0
    max_steering: float = math.radians(30.0)
    seed_offset: int = 0

    def __post_init__(self):
        if self.kind not in STRATEGY_KINDS:
            raise ValueError("unknown strategy kind {!r}; expected one of {}".format(self.kind, STRATEGY_KINDS))
        if self.turn_interval < 1:
            raise ValueError("turn_interval must be >= 1, got {}".format(self.turn_interval))
        if self.kind == CIRCLING and self.circle_radius == 0:
            raise ValueError("circling needs a non-zero circle_radius")
        if self.kind == WAYPOINT_PATROL and not self.waypoints:
            raise ValueError("waypoint-patrol needs at least one waypoint")
        object.__setattr__(self, "waypoints", tuple(tuple(float(v) for v in wp) for wp in self.waypoints))

    def with_offset(self, seed_offset):
        return replace(self, seed_offset=seed_offset)


def strategy_step(spec, vehicle, step, seed):
    """
    # Args
        spec : StrategySpec
        vehicle : VehicleState
        step : int
        seed : int

    # Returns
        steering_angle : float, radians
    """
    if spec.kind == BOUNCE_STRAIGHT:
        # wall reflection is applied by the world on contact
        return 0.0
    elif spec.kind == RANDOM_TURNS:
        rng = make_rng(seed, spec.seed_offset, step // spec.turn_interval)
        return float(rng.uniform(-spec.turn_magnitude, spec.turn_magnitude))
    elif spec.kind == CIRCLING:
        return steering_for_radius(vehicle.wheelbase, spec.circle_radius)
    else:
        target_x, target_y = spec.waypoints[(step // spec.turn_interval + spec.seed_offset) % len(spec.waypoints)]
        bearing = math.atan2(target_y - vehicle.y, target_x - vehicle.x)
        error = normalize_angle(bearing - vehicle.heading)
        return float(np.clip(spec.gain * error, -spec.max_steering, spec.max_steering))


def reflect_heading(heading, wall):
    """Specular reflection of a heading off an axis-aligned wall (x1, y1, x2, y2)."""
    x1, y1, x2, y2 = wall
    if x1 == x2:
        return normalize_angle(math.pi - heading)
    return normalize_angle(-heading)
