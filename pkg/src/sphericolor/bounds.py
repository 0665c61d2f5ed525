"""Closed-form bounds of the probabilistic construction, at high precision.

With red probability ``p = q^(-3/4)`` the expected number of red solutions of
the three congruences is at most ``3 p^3 q^2 + 9 p^2 q``. The probability of
an all-blue progression is at most ``10^4 m^6 (1 - p)^(q/6)``, the number of
interval patterns (a sign-pattern count) times the chance that ``q/6``
distinct residues are all blue. A pair ``(q, m)`` is sufficient when both
quantities are below one half.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

import mpmath
import numpy as np

from .coloring import ModulusLike, as_modulus, generate_random_coloring
from .red import OFFSETS, find_red_solutions

DIGITS_ENV = "SPHERICOLOR_DIGITS"
HALF = mpmath.mpf(1) / 2


def default_digits() -> int:
    return int(os.environ.get(DIGITS_ENV, "50"))


def _dps(digits: Optional[int]) -> int:
    return (digits or default_digits()) + 10


def sign_pattern_bound(M: int, N: int, D: int) -> int:
    """``ceil((50*D*M/N)^N)``, exactly."""
    if not (N >= 2 and M >= N and D >= 1):
        raise ValueError(f"need M >= N >= 2 and D >= 1, got M={M}, N={N}, D={D}")
    v = Fraction(50 * D * M, N) ** N
    return -((-v.numerator) // v.denominator)


def pattern_count_bound(m: int) -> int:
    """Sign-pattern bound for progressions: ``M = 4 m^3`` lines in 2 variables."""
    return sign_pattern_bound(4 * m**3, 2, 1)


@dataclass(frozen=True)
class RedBound:
    value: mpmath.mpf
    majorant: mpmath.mpf


def expected_red_bound(q: int, *, digits: Optional[int] = None) -> RedBound:
    if q < 2:
        raise ValueError("q must be at least 2")
    with mpmath.workdps(_dps(digits)):
        qq = mpmath.mpf(q)
        p = qq ** mpmath.mpf("-0.75")
        value = 3 * p**3 * qq**2 + 9 * p**2 * qq
        majorant = 12 * qq ** mpmath.mpf("-0.25")
        if value > majorant:
            raise AssertionError(f"red bound {value} exceeds majorant {majorant}")
        return RedBound(+value, +majorant)


def log_blue_failure_bound(q: int, m: int, *, digits: Optional[int] = None) -> mpmath.mpf:
    if q < 2 or m < 1:
        raise ValueError("need q >= 2 and m >= 1")
    with mpmath.workdps(_dps(digits)):
        qq = mpmath.mpf(q)
        p = qq ** mpmath.mpf("-0.75")
        return mpmath.log(10**4) + 6 * mpmath.log(m) + qq / 6 * mpmath.log1p(-p)


def blue_failure_bound(q: int, m: int, *, digits: Optional[int] = None) -> mpmath.mpf:
    """``10^4 m^6 (1 - q^(-3/4))^(q/6)`` evaluated through its logarithm."""
    with mpmath.workdps(_dps(digits)):
        return mpmath.exp(log_blue_failure_bound(q, m, digits=digits))


@dataclass(frozen=True)
class BoundsReport:
    q: int
    m: int
    p: mpmath.mpf
    red_bound: mpmath.mpf
    blue_bound: mpmath.mpf

    @property
    def sufficient(self) -> bool:
        return self.red_bound < HALF and self.blue_bound < HALF

    def to_dict(self, digits: Optional[int] = None) -> dict:
        n = digits or default_digits()
        fmt = lambda x: mpmath.nstr(x, n, min_fixed=-3, max_fixed=3)
        return {
            "q": self.q,
            "m": self.m,
            "log10_m": mpmath.nstr(mpmath.log10(self.m), 12),
            "p": fmt(self.p),
            "red_bound": fmt(self.red_bound),
            "blue_bound": fmt(self.blue_bound),
            "sufficient": self.sufficient,
        }


def bounds_report(q: int, m: Optional[int] = None, *, digits: Optional[int] = None) -> BoundsReport:
    """Both bounds for ``(q, m)``; ``m`` defaults to ``q^3``."""
    m = q**3 if m is None else m
    with mpmath.workdps(_dps(digits)):
        p = mpmath.mpf(q) ** mpmath.mpf("-0.75")
        return BoundsReport(q, m, +p, expected_red_bound(q, digits=digits).value,
                            blue_failure_bound(q, m, digits=digits))


def default_grid() -> list:
    """Integers ``round(10^(k/4))`` for ``10^4 <= q <= 10^20``."""
    return [round(10 ** (k / 4)) for k in range(16, 81)]


class InsufficientGrid(ValueError):
    pass


def _round_up_3sig(x: int) -> int:
    unit = 10 ** max(0, len(str(x)) - 3)
    return -(-x // unit) * unit


def find_sufficient_parameters(grid: Optional[Iterable[int]] = None, *, refine: Optional[bool] = None,
                               digits: Optional[int] = None) -> BoundsReport:
    """Smallest grid ``q`` for which ``(q, q^3)`` is sufficient.

    The default grid is refined by bisection between the last insufficient
    and the first sufficient point, down to three significant digits.
    """
    if grid is None:
        grid = default_grid()
        refine = True if refine is None else refine
    grid = sorted({int(g) for g in grid})
    if not grid:
        raise ValueError("empty grid")
    prev = None
    for q in grid:
        if bounds_report(q, digits=digits).sufficient:
            break
        prev = q
    else:
        raise InsufficientGrid(f"no sufficient q in grid (largest {grid[-1]})")
    if refine and prev is not None:
        lo, hi = prev, q
        while hi - lo > max(1, hi // 10**4):
            mid = (lo + hi) // 2
            if bounds_report(mid, digits=digits).sufficient:
                hi = mid
            else:
                lo = mid
        q = _round_up_3sig(hi)
    report = bounds_report(q, digits=digits)
    if not report.sufficient:
        raise AssertionError(f"refined q={q} is not sufficient")
    return report


@dataclass(frozen=True)
class EmpiricalRed:
    mean: float
    stderr: float
    seeds: int
    bound: float


def empirical_expected_red(q: ModulusLike, seeds: int, *, p: Optional[float] = None,
                           first_seed: int = 0) -> EmpiricalRed:
    """Mean total red-solution count over colorings with seeds ``first_seed, ...``."""
    q = as_modulus(q).q
    counts = np.array([
        sum(len(find_red_solutions(generate_random_coloring(q, s, p), c)) for c in OFFSETS)
        for s in range(first_seed, first_seed + seeds)
    ], dtype=float)
    stderr = float(counts.std(ddof=1) / math.sqrt(seeds)) if seeds > 1 else float("nan")
    return EmpiricalRed(float(counts.mean()), stderr, seeds, float(expected_red_bound(q).value))
