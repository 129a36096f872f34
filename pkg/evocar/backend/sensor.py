# -*- coding: utf-8 -*-
# Front-facing rangefinder: equally spaced beams, readings normalized to [0, 1].

import math
from dataclasses import dataclass

import numpy as np

from evocar.backend.utils.geometry import ray_distances, rect_edges, segments_near_box


@dataclass(frozen=True)
class RangefinderConfig:
    beam_count: int = 5
    field_of_view: float = math.pi
    max_range: float = 20.0

    def __post_init__(self):
        if self.beam_count < 1:
            raise ValueError("beam_count must be >= 1, got {}".format(self.beam_count))
        if self.max_range <= 0:
            raise ValueError("max_range must be > 0, got {}".format(self.max_range))
        if not 0 <= self.field_of_view <= 2 * math.pi:
            raise ValueError("field_of_view must be in [0, 2*pi], got {}".format(self.field_of_view))

    def beam_offsets(self):
        """Beam angles relative to the heading, symmetric about it; one beam points straight ahead."""
        if self.beam_count == 1:
            return np.zeros(1)
        half = self.field_of_view / 2.
        return np.linspace(-half, half, self.beam_count)


def sense(ego, environment, others, config):
    """
    # Args
        ego : VehicleState
        environment : Environment
        others : list of VehicleState, sensed as their body rectangles
        config : RangefinderConfig

    # Returns
        readings : array, shape of (beam_count,)
            nearest hit distance / max_range, 1.0 when nothing is within range
    """
    angles = ego.heading + config.beam_offsets()
    directions = np.stack([np.cos(angles), np.sin(angles)], axis=1)

    segments = np.vstack([environment.walls] + [rect_edges(o.corners()) for o in others])
    reach = config.max_range
    segments = segments[segments_near_box(segments, (ego.x - reach, ego.y - reach, ego.x + reach, ego.y + reach))]
    distances = ray_distances(ego.position, directions, segments)
    return np.minimum(distances, config.max_range) / config.max_range
