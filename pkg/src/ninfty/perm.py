"""Permutations of {1..n} in one-line notation.

A permutation ``p`` is a tuple with ``p[i - 1]`` the image of ``i``.
Composition applies the right factor first: ``compose(a, b)(i) == a(b(i))``.
Every module uses this convention.
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache
from typing import Iterable, Tuple

Perm = Tuple[int, ...]


def identity(n: int) -> Perm:
    return tuple(range(1, n + 1))


def is_perm(p: Iterable[int]) -> bool:
    p = tuple(p)
    return sorted(p) == list(range(1, len(p) + 1))


def compose(a: Perm, b: Perm) -> Perm:
    """Return ``a o b``, i.e. ``b`` applied first."""
    return tuple([a[x - 1] for x in b])


def inverse(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, x in enumerate(p, 1):
        out[x - 1] = i
    return tuple(out)


def apply(p: Perm, i: int) -> int:
    return p[i - 1]


def order(p: Perm) -> int:
    result = 1
    for cycle in cycles(p):
        result = result * len(cycle) // math.gcd(result, len(cycle))
    return result


def cycles(p: Perm) -> list[tuple[int, ...]]:
    seen = set()
    out = []
    for start in range(1, len(p) + 1):
        if start in seen:
            continue
        cyc = []
        i = start
        while i not in seen:
            seen.add(i)
            cyc.append(i)
            i = p[i - 1]
        out.append(tuple(cyc))
    return out


def fmt(p: Perm) -> str:
    """Cycle notation, e.g. ``(1 2)(3)`` prints as ``(1 2)``."""
    parts = ["(" + " ".join(map(str, c)) + ")" for c in cycles(p) if len(c) > 1]
    return "".join(parts) or "()"


@lru_cache(maxsize=None)
def all_perms(n: int) -> tuple[Perm, ...]:
    """All of Sigma_n in lexicographic order."""
    return tuple(itertools.permutations(range(1, n + 1)))


@lru_cache(maxsize=None)
def perms_of_order_dividing(n: int, k: int) -> tuple[Perm, ...]:
    return tuple(p for p in all_perms(n) if k % order(p) == 0)


def block_sum(perms: Iterable[Perm]) -> Perm:
    """Juxtapose permutations, the i-th acting on the i-th block of labels."""
    out: list[int] = []
    offset = 0
    for p in perms:
        out.extend(x + offset for x in p)
        offset += len(p)
    return tuple(out)
