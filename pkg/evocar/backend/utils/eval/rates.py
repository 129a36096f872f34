# -*- coding: utf-8 -*-
from collections import namedtuple

import numpy as np

RateRow = namedtuple("RateRow", ["strategy", "before", "after"])
CollisionMeasurement = namedtuple("CollisionMeasurement", ["count", "seconds", "rate"])


def collision_rate(n_collisions, n_steps, dt):
    """
    # Returns
        rate : collisions per simulated second
    """
    seconds = n_steps * dt
    if seconds <= 0:
        raise ValueError("measurement needs a positive duration, got {} steps of {} s".format(n_steps, dt))
    return CollisionMeasurement(n_collisions, seconds, n_collisions / seconds)


def reduction(before, after):
    """Fractional drop from before to after; 0 when there was nothing to reduce."""
    if before <= 0:
        return 0.0
    return (before - after) / before


class CollisionRateReport(object):
    """Collisions per second before and after learning, one row per strategy."""

    def __init__(self, rows=()):
        self.rows = list(rows)

    def add(self, strategy, before, after):
        self.rows.append(RateRow(strategy, float(before), float(after)))

    def mean_reduction(self):
        return float(np.mean([reduction(r.before, r.after) for r in self.rows]))

    def mean_after(self):
        return float(np.mean([r.after for r in self.rows]))

    def improved(self):
        return [r.strategy for r in self.rows if r.after < r.before]

    def __len__(self):
        return len(self.rows)
