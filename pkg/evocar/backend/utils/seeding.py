# -*- coding: utf-8 -*-
import numpy as np


def derive_seed(*keys):
    """Map a key path (master seed, generation, individual, ...) to a 32-bit seed.

    # Args
        keys : non-negative ints

    # Returns
        seed : int
    """
    entropy = [int(k) for k in keys]
    if any(k < 0 for k in entropy):
        raise ValueError("seed keys must be non-negative, got {}".format(entropy))
    return int(np.random.SeedSequence(entropy).generate_state(1, dtype=np.uint32)[0])


def make_rng(*keys):
    return np.random.default_rng(np.random.SeedSequence([int(k) for k in keys]))
