"""Exhaustive search for red solutions of y1 + y3 = 2*y2 + c (mod q).

A red solution of ``y1 + y3 = 2*y2 + 2`` over the nonnegative reals forces a
red solution of one of the three congruences with ``c`` in ``{1, 2, 3}`` on
the floors, so checking those congruences certifies the lifted coloring.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import numpy as np

from .coloring import ZqColoring

OFFSETS = (1, 2, 3)
BRUTE_FORCE_MAX_Q = 1000


class ReductionContradiction(AssertionError):
    """Floors of a valid triple produced an offset outside {1, 2, 3}."""


@dataclass(frozen=True, order=True)
class RedSolution:
    y1: int
    y2: int
    y3: int
    c: int


@dataclass(frozen=True)
class RedReduction:
    y1: Fraction
    y2: Fraction
    y3: Fraction
    n1: int
    n2: int
    n3: int
    eps1: Fraction
    eps2: Fraction
    eps3: Fraction
    c: int


def _check_offset(c: int) -> None:
    if c not in OFFSETS:
        raise ValueError(f"offset c must be one of {OFFSETS}, got {c}")


def find_red_solutions(coloring: ZqColoring, c: int) -> list:
    """All red ``(y1, y2, y3)`` with ``y1 + y3 = 2*y2 + c`` mod q.

    Iterates ordered pairs of red residues; results are in lexicographic
    ``(y1, y2)`` order.
    """
    _check_offset(c)
    q = coloring.q
    reds = np.flatnonzero(coloring.red_mask)
    if reds.size == 0:
        return []
    y1, y2 = np.meshgrid(reds, reds, indexing="ij")
    y1, y2 = y1.ravel(), y2.ravel()
    y3 = (2 * y2 - y1 + c) % q
    hit = coloring.red_mask[y3]
    return [RedSolution(a, b, d, c) for a, b, d in zip(y1[hit].tolist(), y2[hit].tolist(), y3[hit].tolist())]


def brute_force_red_solutions(coloring: ZqColoring, c: int) -> list:
    """Cubic enumeration over Z_q^3; an oracle for :func:`find_red_solutions`."""
    _check_offset(c)
    q = coloring.q
    if q > BRUTE_FORCE_MAX_Q:
        raise ValueError(f"cubic enumeration refused for q={q} > {BRUTE_FORCE_MAX_Q}")
    color = [coloring.color(i).value for i in range(q)]
    out = []
    for y1 in range(q):
        for y2 in range(q):
            for y3 in range(q):
                if (y1 + y3 - 2 * y2 - c) % q == 0 and color[y1] == color[y2] == color[y3] == "R":
                    out.append(RedSolution(y1, y2, y3, c))
    return out


def all_red_solutions(coloring: ZqColoring) -> list:
    return [s for c in OFFSETS for s in find_red_solutions(coloring, c)]


def verify_red_free(coloring: ZqColoring) -> bool:
    return all(not find_red_solutions(coloring, c) for c in OFFSETS)


def verification_report(coloring: ZqColoring) -> dict:
    solutions = all_red_solutions(coloring)
    return {
        "q": coloring.q,
        "c_checked": list(OFFSETS),
        "red_count": coloring.red_count,
        "solutions": [[s.y1, s.y2, s.y3, s.c] for s in solutions],
        "red_free": not solutions,
    }


def _exact(y) -> Fraction:
    if isinstance(y, bool) or not isinstance(y, (int, Rational)):
        raise TypeError(f"exact rational input required, got {type(y).__name__}")
    return Fraction(y)


def reduce_red_triple(y1, y2, y3) -> RedReduction:
    """Floors and offset of a real solution of ``y1 + y3 = 2*y2 + 2``."""
    y1, y2, y3 = _exact(y1), _exact(y2), _exact(y3)
    if min(y1, y2, y3) < 0:
        raise ValueError("inputs must be nonnegative")
    if y1 + y3 != 2 * y2 + 2:
        raise ValueError(f"{y1} + {y3} != 2*{y2} + 2")
    n1, n2, n3 = math.floor(y1), math.floor(y2), math.floor(y3)
    c = n1 + n3 - 2 * n2
    if c not in OFFSETS:
        raise ReductionContradiction(f"offset {c} for triple {(y1, y2, y3)}")
    return RedReduction(y1, y2, y3, n1, n2, n3, y1 - n1, y2 - n2, y3 - n3, c)
