"""Seeded structure families shared by several test modules."""

import numpy as np

from arraybound.structure import Signature, Structure, gen_matching


def matching_plus_noise(k, seed, density=0.3):
    """A perfect matching on 2k vertices with a random unary colour ``P``."""
    rng = np.random.default_rng(seed)
    base = gen_matching(k)
    colour = [(v,) for v in range(2 * k) if rng.random() < density]
    return Structure(Signature.of({"E": 2, "P": 1}), 2 * k, {"E": base.table("E"), "P": colour})


def random_tuple(s, length, seed, avoid=()):
    rng = np.random.default_rng(seed)
    pool = [e for e in range(s.size) if e not in set(avoid)]
    return tuple(int(e) for e in rng.choice(pool, size=length, replace=True))
