"""Distribution of ``x^2 + alpha*x + beta`` over the unit intervals mod q.

Real coefficients are carried as :class:`ApproxReal` values, an exact
rational center plus an error radius. Every floor and every comparison is
decided on the whole interval ``[center - radius, center + radius]``; when
the interval straddles a decision boundary :class:`PrecisionError` is raised
instead of guessing.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from numbers import Rational
from typing import Optional, Union

import mpmath

from .coloring import ModulusLike, as_modulus

DEFAULT_DIGITS = 50
LEMMA_MAX_Q = 1000


class PrecisionError(ArithmeticError):
    """Input precision is too coarse to decide a comparison."""


@dataclass(frozen=True)
class ApproxReal:
    center: Fraction
    radius: Fraction = Fraction(0)
    label: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "center", Fraction(self.center))
        object.__setattr__(self, "radius", Fraction(self.radius))
        if self.radius < 0:
            raise ValueError("radius must be nonnegative")

    @property
    def exact(self) -> bool:
        return self.radius == 0

    def __str__(self):
        if self.label:
            return self.label
        c = self.center
        return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


RealLike = Union[int, Fraction, ApproxReal]


def as_approx(x: RealLike) -> ApproxReal:
    if isinstance(x, ApproxReal):
        return x
    if isinstance(x, bool) or not isinstance(x, (int, Rational)):
        raise TypeError(f"use an exact rational or ApproxReal, got {type(x).__name__}")
    return ApproxReal(Fraction(x))


_CONSTANTS = {"pi": lambda: mpmath.pi, "e": lambda: mpmath.e}


def parse_real(text: str, digits: int = DEFAULT_DIGITS) -> ApproxReal:
    """Parse ``"17/13"``, ``"0.25"``, ``"pi"``, ``"e"`` or ``"sqrt(2)"``.

    Rationals and finite decimals are exact. Constants are truncated to
    ``digits`` decimal places with radius ``10**-digits``.
    """
    s = text.strip()
    try:
        return ApproxReal(Fraction(s), label=s)
    except ValueError:
        pass
    m = re.fullmatch(r"sqrt\((\d+)\)", s)
    if m:
        n = int(m.group(1))
        scale = 10**digits
        r = math.isqrt(n * scale * scale)
        return ApproxReal(Fraction(r, scale), Fraction(0 if r * r == n * scale * scale else 1, scale), s)
    if s in _CONSTANTS:
        with mpmath.workdps(digits + 20):
            v = int(mpmath.floor(_CONSTANTS[s]() * mpmath.mpf(10) ** digits))
        return ApproxReal(Fraction(v, 10**digits), Fraction(1, 10**digits), s)
    raise ValueError(f"cannot parse real {text!r}")


@dataclass(frozen=True)
class QuadraticParams:
    alpha: ApproxReal
    beta: ApproxReal

    def __post_init__(self):
        object.__setattr__(self, "alpha", as_approx(self.alpha))
        object.__setattr__(self, "beta", as_approx(self.beta))

    def value(self, x: int):
        """Center and radius of ``x^2 + alpha*x + beta``."""
        a, b = self.alpha, self.beta
        return x * x + a.center * x + b.center, a.radius * abs(x) + b.radius


class Branch(str, Enum):
    COPRIME = "coprime"
    MULTIPLE = "multiple"


@dataclass(frozen=True)
class RationalApprox:
    """``k*alpha = r*q + eps`` with ``|eps| <= 1/q`` and ``k <= q^2``.

    In the multiple branch ``k = s*q`` and ``alpha = r/s + eps_prime`` with
    ``gcd(r, s) = 1`` and ``|eps_prime| <= 1/q^2``. In the coprime branch
    ``s`` equals ``k`` and ``eps_prime`` is ``None``.
    """

    k: int
    r: int
    s: int
    eps: Fraction
    branch: Branch
    eps_prime: Optional[Fraction] = None


def _nearest_multiple(x: Fraction, q: int) -> int:
    return math.floor(x / q + Fraction(1, 2))


def find_small_multiple(alpha: RealLike, q: ModulusLike) -> RationalApprox:
    """Smallest ``k <= q^2`` with ``k*alpha`` within ``1/q`` of a multiple of q."""
    q = int(q)
    alpha = as_approx(alpha)
    if alpha.radius > Fraction(1, 2 * q**3):
        raise PrecisionError(f"alpha radius {float(alpha.radius):.3g} exceeds 1/(2q^3)")
    tol = Fraction(1, q)
    for k in range(1, q * q + 1):
        x = k * alpha.center
        r = _nearest_multiple(x, q)
        dist, err = abs(x - r * q), k * alpha.radius
        if dist + err <= tol:
            break
        if dist - err <= tol:
            raise PrecisionError(f"cannot decide |{k}*alpha| <= 1/q at this precision")
    else:
        raise AssertionError("no k <= q^2 found; pigeonhole violated")
    eps = x - r * q
    if k % q:
        return RationalApprox(k, r, k, eps, Branch.COPRIME)
    s = k // q
    g = math.gcd(r, s)
    r, s = r // g, s // g
    return RationalApprox(k, r, s, eps, Branch.MULTIPLE, alpha.center - Fraction(r, s))


def _interval_mod(center: Fraction, radius: Fraction, q: int) -> int:
    lo, hi = math.floor(center - radius), math.floor(center + radius)
    if lo != hi:
        raise PrecisionError(f"value {float(center)} too close to an integer for radius {float(radius):.3g}")
    return lo % q


def hit_intervals(params: QuadraticParams, q: ModulusLike, xs) -> set:
    """Residues ``j`` with some ``p(x) mod q`` in ``[j, j+1)``, for x in ``xs``."""
    q = int(q)
    return {_interval_mod(*params.value(x), q) for x in xs}


def count_hit_intervals(params: QuadraticParams, q: ModulusLike, m: int) -> int:
    if m < 1:
        raise ValueError(f"m must be positive, got {m}")
    return len(hit_intervals(params, q, range(1, m + 1)))


def verify_lemma_dist(params: QuadraticParams, q: ModulusLike, *, max_q: int = LEMMA_MAX_Q):
    """``(count, passed)`` for ``m = q^3``; passes when ``count >= q/6``."""
    q = int(q)
    if q > max_q:
        raise ValueError(f"q={q} exceeds the q^3 enumeration guard {max_q}")
    count = count_hit_intervals(params, q, q**3)
    return count, 6 * count >= q


def distinct_squares_count(q: int) -> int:
    return len({i * i % q for i in range(1, q + 1)})


def branch_value_count(approx: RationalApprox, q: ModulusLike) -> int:
    """Distinct values of ``s^2 i^2 + r i`` mod q for ``i = 1..q``."""
    if approx.branch is not Branch.MULTIPLE:
        raise ValueError("branch_value_count needs the multiple branch")
    q = int(q)
    s, r = approx.s, approx.r
    return len({(s * s * i * i + r * i) % q for i in range(1, q + 1)})


def dilate_intervals(intervals, q: int) -> set:
    """Close a set of residues under the neighbors ``j - 1`` and ``j + 1``."""
    return {(j + t) % q for j in intervals for t in (-1, 0, 1)}


def _mod_distance(x: Fraction, q: int) -> Fraction:
    t = x % q
    return min(t, q - t)


@dataclass(frozen=True)
class BranchCheck:
    """Executable trace of the two-case counting argument for one ``(alpha, beta)``.

    ``reference_hits`` are the intervals hit by the comparison polynomial
    (``x^2 + beta`` at ``x = k*i`` in the coprime branch, ``x^2 + (r/s) x + beta``
    at ``x = s*i`` in the multiple branch), ``actual_hits`` those hit by ``p``
    at the same points and ``max_shift`` the largest mod-q distance between
    the two polynomials there.
    """

    approx: RationalApprox
    reference_hits: frozenset
    actual_hits: frozenset
    max_shift: Fraction

    def holds(self, q: int) -> bool:
        return (2 * len(self.reference_hits) >= q
                and self.max_shift <= 1
                and self.reference_hits <= dilate_intervals(self.actual_hits, q)
                and 6 * len(self.actual_hits) >= q)


def branch_check(params: QuadraticParams, q: ModulusLike) -> BranchCheck:
    q = int(q)
    approx = find_small_multiple(params.alpha, q)
    beta = params.beta
    if approx.branch is Branch.COPRIME:
        step, slope = approx.k, Fraction(0)
    else:
        step, slope = approx.s, Fraction(approx.r, approx.s)
    reference = QuadraticParams(ApproxReal(slope), beta)
    xs = [step * i for i in range(1, q + 1)]
    ref = hit_intervals(reference, q, xs)
    act = hit_intervals(params, q, xs)
    # Radius of alpha only widens the bound; it is at most q^3 * radius <= 1/2.
    shift = max(_mod_distance((params.alpha.center - slope) * x, q) + params.alpha.radius * x for x in xs)
    return BranchCheck(approx, frozenset(ref), frozenset(act), shift)


def lemma_report(params: QuadraticParams, q: ModulusLike) -> dict:
    q = int(q)
    approx = find_small_multiple(params.alpha, q)
    count, passed = verify_lemma_dist(params, q)
    return {
        "q": q,
        "alpha": str(params.alpha),
        "beta": str(params.beta),
        "k": approx.k,
        "branch": approx.branch.value,
        "hit_count": count,
        "threshold": str(Fraction(q, 6)),
        "pass": passed,
    }
