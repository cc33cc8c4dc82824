"""Seeded random spec generators shared by the test modules.

Two shapes are produced: specs whose every level is in the restricted form
(so the margin-stripping recursion applies), and plain reduced specs with
arbitrary loop exponents.  Both keep circuit lengths small enough to
materialize, and both are deterministic in the supplied RNG.
"""
from __future__ import annotations

import random

from proxrank2 import CoveringSpec, LevelMap, RestrictedLevelMap


def random_restricted_spec(
    rng: random.Random, max_depth: int = 6, max_length: int = 10**6
) -> CoveringSpec:
    """A spec whose every level map has the ``E^s C^t mid C^t' E^s'`` shape."""
    l1 = rng.choice((2, 3, 4, 5, 7))
    depth = rng.randint(3, max_depth)
    levels: list[LevelMap] = []
    length = l1
    for _ in range(depth):
        placed = False
        for _ in range(40):
            rm = RestrictedLevelMap(
                s=rng.randint(1, 4),
                t=rng.randint(2, 4),
                a_mid="".join(rng.choice("EC") for _ in range(rng.randint(0, 4))),
                t2=rng.randint(2, 4),
                s2=rng.randint(1, 4),
            )
            lm = rm.to_level_map()
            nxt = lm.next_length(length)
            if nxt <= max_length:
                levels.append(lm)
                length = nxt
                placed = True
                break
        if not placed:
            break
    return CoveringSpec(l1=l1, levels=tuple(levels))


def random_plain_spec(
    rng: random.Random, depth: int = 5, max_length: int = 10**6
) -> CoveringSpec:
    """A reduced spec with free-form loop exponents (not restricted)."""
    l1 = rng.randint(2, 6)
    levels: list[LevelMap] = []
    length = l1
    for _ in range(depth):
        for _ in range(40):
            b = rng.randint(1, 4)
            a = tuple(
                rng.randint(1, 3) if j in (0, b) else rng.randint(0, 3)
                for j in range(b + 1)
            )
            lm = LevelMap(a=a, b=b)
            nxt = lm.next_length(length)
            if nxt <= max_length:
                levels.append(lm)
                length = nxt
                break
        else:
            break
    return CoveringSpec(l1=l1, levels=tuple(levels))
