# -*- coding: utf-8 -*-
# Kinematic bicycle model with fixed speed.

import math
from dataclasses import dataclass, replace

from evocar.backend.utils.geometry import normalize_angle, rect_corners

DEFAULT_SPEED = 10.0
DEFAULT_WHEELBASE = 2.5
DEFAULT_LENGTH = 4.0
DEFAULT_WIDTH = 2.0


@dataclass(frozen=True)
class VehicleState:
    """Pose and shape of one vehicle; (x, y) is the body centre in meters."""
    x: float
    y: float
    heading: float = 0.0
    speed: float = DEFAULT_SPEED
    wheelbase: float = DEFAULT_WHEELBASE
    length: float = DEFAULT_LENGTH
    width: float = DEFAULT_WIDTH

    def __post_init__(self):
        if self.speed < 0:
            raise ValueError("speed must be >= 0, got {}".format(self.speed))
        if self.wheelbase <= 0:
            raise ValueError("wheelbase must be > 0, got {}".format(self.wheelbase))
        if self.length <= 0 or self.width <= 0:
            raise ValueError("body extents must be > 0, got {}x{}".format(self.length, self.width))
        object.__setattr__(self, "heading", normalize_angle(float(self.heading)))

    @property
    def position(self):
        return self.x, self.y

    def corners(self):
        return rect_corners(self.x, self.y, self.heading, self.length, self.width)

    def moved_to(self, x, y, heading):
        return replace(self, x=x, y=y, heading=heading)


def turning_radius(wheelbase, steering_angle):
    return wheelbase / math.tan(steering_angle)


def steering_for_radius(wheelbase, radius):
    return math.atan(wheelbase / radius)


def step_vehicle(state, steering_angle, dt):
    """Advance one tick: L = speed*dt, heading += L/wheelbase*tan(steering), position moves L
    along the mean of the old and new headings.

    # Args
        state : VehicleState
        steering_angle : float, radians, |steering_angle| < pi/2, positive turns left
        dt : float, seconds

    # Returns
        state : VehicleState
    """
    if abs(steering_angle) >= math.pi / 2:
        raise ValueError("steering angle must be within (-pi/2, pi/2), got {}".format(steering_angle))
    travel = state.speed * dt
    if travel == 0:
        return state
    new_heading = state.heading + travel / state.wheelbase * math.tan(steering_angle)
    mean_heading = (state.heading + new_heading) / 2.
    return state.moved_to(state.x + travel * math.cos(mean_heading),
                          state.y + travel * math.sin(mean_heading),
                          new_heading)
