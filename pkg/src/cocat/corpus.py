"""Named small inputs and seeded random instances."""

from __future__ import annotations

import random

from .groupoid import (delooping, disjoint_union, functors, indiscrete, is_weak_equivalence,
                       point, product)
from .groups import cyclic, symmetric, trivial_group

SMALL_GROUPS = (trivial_group(), cyclic(2), cyclic(3))


def named_groupoid(name):
    table = {
        "*": point,
        "BC2": lambda: delooping(cyclic(2)),
        "BC3": lambda: delooping(cyclic(3)),
        "BS3": lambda: delooping(symmetric(3)),
        "I2": lambda: indiscrete(2),
    }
    return table[name]()


def _component(m, g):
    c, _, _ = product(indiscrete(m), delooping(g))
    return c


def random_groupoid(rng, max_components=2, max_size=2, groups=SMALL_GROUPS):
    """Disjoint union of ``indiscrete(m) x BG`` blocks."""
    k = rng.randint(1, max_components)
    shape = tuple((rng.randint(1, max_size), rng.randrange(len(groups))) for _ in range(k))
    return groupoid_of_shape(shape, groups), shape


def groupoid_of_shape(shape, groups=SMALL_GROUPS):
    parts = [_component(m, groups[gi]) for m, gi in shape]
    if len(parts) == 1:
        return parts[0]
    return disjoint_union(parts)[0]


def reshaped(rng, shape, max_size=2):
    """An equivalent shape: each block keeps its group, sizes change."""
    return tuple((rng.randint(1, max_size), gi) for _, gi in shape)


def random_map(rng, x, y, want_weq=None, limit=2000):
    """A functor x -> y chosen uniformly from the first ``limit`` in
    enumeration order, optionally required to be (or not be) a weak equivalence."""
    fs = []
    for f in functors(x, y):
        fs.append(f)
        if len(fs) >= limit:
            break
    if want_weq is not None:
        fs = [f for f in fs if bool(is_weak_equivalence(f)) == want_weq]
    return rng.choice(fs) if fs else None


def random_weq_into(rng, y, shape, max_size=2):
    """A weak equivalence ``w -> y`` from a randomly resized copy of ``y``."""
    w = groupoid_of_shape(reshaped(rng, shape, max_size))
    return random_map(rng, w, y, want_weq=True)


def make_rng(seed):
    return random.Random(seed)
