"""Quadratic progressions and exact enumeration of their interval patterns.

A blue copy of the unit progression of length m has squared distances
``y_i = a + (i-1)*d + (i-1)*(i-2)`` to the origin. Reducing ``a`` and ``d``
mod q does not change any residue ``floor(y_i) mod q``, so it suffices to
study ``(a, d)`` in the half-open square ``[0, q)^2``.

The floor vector ``(floor(y_1), ..., floor(y_m))`` is constant on the faces
of the arrangement of lines ``a + (i-1)*d = K`` (K integer) together with
the four sides of the square. :func:`enumerate_patterns` visits every
vertex of that arrangement and probes every face incident to it, so every
pattern realized in the square is found. All predicates use int64 integer
arithmetic on common denominators; no float decides a floor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Optional

import numpy as np

from .coloring import Color, ModulusLike, ZqColoring, as_modulus, substream

DEFAULT_MAX_M = 64
DEFAULT_MAX_Q = 64


class GuardExceeded(ValueError):
    """Requested arrangement exceeds the configured size guard."""


def _exact(x, name: str) -> Fraction:
    if isinstance(x, bool) or not isinstance(x, (int, Rational)):
        raise TypeError(f"{name} must be an exact rational, got {type(x).__name__}")
    return Fraction(x)


def offset(i: int) -> int:
    """Quadratic part ``i^2 - 3i + 2`` of the i-th term (1-based)."""
    return (i - 1) * (i - 2)


@dataclass(frozen=True)
class Progression:
    a: Fraction
    d: Fraction
    m: int

    def __post_init__(self):
        object.__setattr__(self, "a", _exact(self.a, "a"))
        object.__setattr__(self, "d", _exact(self.d, "d"))
        if self.a < 0 or self.d < 0:
            raise ValueError("a and d must be nonnegative")
        if int(self.m) < 1:
            raise ValueError(f"m must be positive, got {self.m}")
        object.__setattr__(self, "m", int(self.m))


def progression_values(p: Progression) -> list:
    return [p.a + (i - 1) * p.d + offset(i) for i in range(1, p.m + 1)]


def value_bound(q: ModulusLike, m: int) -> int:
    """Integer ``B`` with every ``y_i < B`` for ``(a, d)`` in ``[0, q)^2``."""
    q = int(q)
    if m < 1:
        raise ValueError(f"m must be positive, got {m}")
    if m >= q**3:
        return 2 * m * m
    return m * q + m * m


@dataclass(frozen=True)
class IntervalPattern:
    indices: tuple

    def residues(self, q: int) -> tuple:
        return tuple(j % q for j in self.indices)


@dataclass(frozen=True)
class ArrangementLine:
    """The line ``a + (i-1)*d = j - (i^2 - 3i + 2)`` where ``y_i`` crosses ``j``."""

    i: int
    j: int

    @property
    def coefficients(self) -> tuple:
        """``(u, v, rhs)`` with the line written ``u*a + v*d = rhs``."""
        return 1, self.i - 1, self.j - offset(self.i)


@dataclass(frozen=True)
class CellWitness:
    a: Fraction
    d: Fraction
    pattern: IntervalPattern

    def progression(self) -> Progression:
        return Progression(self.a, self.d, len(self.pattern.indices))


def residue_pattern(coloring: ZqColoring, p: Progression):
    """Interval indices of the progression and the colors they receive."""
    indices = tuple(math.floor(y) for y in progression_values(p))
    return IntervalPattern(indices), tuple(coloring.color(j) for j in indices)


def pattern_distinct_interval_count(p: Progression, q: ModulusLike) -> int:
    q = int(q)
    return len({math.floor(y) % q for y in progression_values(p)})


def arrangement_lines(q: ModulusLike, m: int) -> list:
    """Lines ``y_i = j`` meeting ``[0, q)^2``, for ``1 <= i <= m``."""
    q = int(q)
    return [ArrangementLine(i, k + offset(i)) for i in range(1, m + 1) for k in range(i * q)]


def _check_guard(q: int, m: int, max_m: int, max_q: int) -> None:
    if m < 1:
        raise ValueError(f"m must be positive, got {m}")
    if m > max_m or q > max_q:
        raise GuardExceeded(
            f"arrangement for q={q}, m={m} exceeds guard (max_q={max_q}, max_m={max_m})")


def _probe_directions(m: int) -> np.ndarray:
    # Line directions in counter-clockwise order, then bisectors of each
    # consecutive pair; every wedge at every vertex contains one of these.
    ccw = [(1, 0), (0, 1)] + [(-k, 1) for k in range(1, m)]
    ccw += [(-1, 0), (0, -1)] + [(k, -1) for k in range(1, m)]
    bis = [(u[0] + v[0], u[1] + v[1]) for u, v in zip(ccw, ccw[1:] + ccw[:1])]
    return np.array([(0, 0)] + ccw + bis, dtype=np.int64)


def _line_families(q: int, m: int) -> list:
    fam = [(1, 0, np.arange(q + 1)), (0, 1, np.array([0, q]))]
    fam += [(1, i - 1, np.arange(i * q + 1)) for i in range(2, m + 1)]
    return fam


def _floors(A, E, D, m: int) -> np.ndarray:
    i = np.arange(1, m + 1, dtype=np.int64)
    num = A[:, None] + (i - 1)[None, :] * E[:, None] + ((i - 1) * (i - 2))[None, :] * D[:, None]
    return num // D[:, None]


def _pattern_arrays(q: int, m: int):
    """Unique patterns (rows, sorted) with integer witnesses ``(A/D, E/D)``."""
    dirs = _probe_directions(m)
    den_max = max(1, m - 1)
    width = int(np.max(np.abs(dirs[:, 0]) + den_max * np.abs(dirs[:, 1])))
    scale = 2 * den_max * width
    fams = _line_families(q, m)
    pats, wits = [], []
    for x in range(len(fams)):
        u1, v1, K1 = fams[x]
        for y in range(x + 1, len(fams)):
            u2, v2, K2 = fams[y]
            det = u1 * v2 - u2 * v1
            if det == 0:
                continue
            k1, k2 = np.meshgrid(K1, K2, indexing="ij")
            k1, k2 = k1.ravel(), k2.ravel()
            an, dn, den = k1 * v2 - k2 * v1, u1 * k2 - u2 * k1, abs(det)
            if det < 0:
                an, dn = -an, -dn
            keep = (an >= 0) & (an <= q * den) & (dn >= 0) & (dn <= q * den)
            an, dn = an[keep], dn[keep]
            A = (an[:, None] * scale + den * dirs[None, :, 0]).ravel()
            E = (dn[:, None] * scale + den * dirs[None, :, 1]).ravel()
            D = np.full(A.shape, den * scale, dtype=np.int64)
            inside = (A >= 0) & (A < q * D) & (E >= 0) & (E < q * D)
            A, E, D = A[inside], E[inside], D[inside]
            if A.size == 0:
                continue
            fl = _floors(A, E, D, m)
            fl, first = np.unique(fl, axis=0, return_index=True)
            pats.append(fl)
            wits.append(np.stack([A[first], E[first], D[first]], axis=1))
        if sum(p.shape[0] for p in pats) > 1_000_000:
            pats, wits = _merge(pats, wits)
    return _merge(pats, wits)


def _merge(pats, wits):
    if not pats:
        return [np.empty((0, 0), dtype=np.int64)], [np.empty((0, 3), dtype=np.int64)]
    allp, allw = np.concatenate(pats), np.concatenate(wits)
    up, first = np.unique(allp, axis=0, return_index=True)
    return [up], [allw[first]]


def pattern_arrays(q: ModulusLike, m: int, *, max_m: int = DEFAULT_MAX_M, max_q: int = DEFAULT_MAX_Q):
    """Array form of :func:`enumerate_patterns`.

    Returns ``(patterns, witnesses)``: an ``(P, m)`` array of distinct floor
    vectors and a ``(P, 3)`` array of ``(A, E, D)`` with ``a = A/D``,
    ``d = E/D`` realizing each row.
    """
    q = as_modulus(q).q
    _check_guard(q, m, max_m, max_q)
    (pats,), (wits,) = _pattern_arrays(q, m)
    bound = value_bound(q, m)
    if pats.size and (pats.min() < 0 or pats.max() >= bound):
        raise AssertionError("pattern index outside [0, B)")
    return pats, wits


def _witness(row, wit) -> CellWitness:
    A, E, D = (int(v) for v in wit)
    return CellWitness(Fraction(A, D), Fraction(E, D), IntervalPattern(tuple(int(v) for v in row)))


def enumerate_patterns(q: ModulusLike, m: int, *, max_m: int = DEFAULT_MAX_M,
                       max_q: int = DEFAULT_MAX_Q) -> set:
    """Every interval pattern realized by some ``(a, d)`` in ``[0, q)^2``."""
    pats, wits = pattern_arrays(q, m, max_m=max_m, max_q=max_q)
    return {_witness(r, w) for r, w in zip(pats, wits)}


def _verified(coloring: ZqColoring, w: CellWitness) -> CellWitness:
    pattern, colors = residue_pattern(coloring, w.progression())
    if pattern != w.pattern or any(c is not Color.BLUE for c in colors):
        raise AssertionError(f"witness {w} does not re-verify as all-blue")
    return w


def search_blue_progression(coloring: ZqColoring, m: int, *, max_m: int = DEFAULT_MAX_M,
                            max_q: int = DEFAULT_MAX_Q) -> Optional[CellWitness]:
    """An all-blue pattern with its witness, or ``None`` if none exists."""
    pats, wits = pattern_arrays(coloring.modulus, m, max_m=max_m, max_q=max_q)
    blue = ~coloring.red_mask[pats % coloring.q].any(axis=1)
    hits = np.flatnonzero(blue)
    if hits.size == 0:
        return None
    k = hits[0]
    return _verified(coloring, _witness(pats[k], wits[k]))


def _sample_points(rng: np.random.Generator, q: int, n: int, max_den: int):
    D = rng.integers(1, max_den + 1, size=n, dtype=np.int64)
    A = rng.integers(0, q * D, dtype=np.int64)
    E = rng.integers(0, q * D, dtype=np.int64)
    return A, E, D


def sample_patterns(q: ModulusLike, m: int, samples: int, seed: int, *,
                    max_den: int = 2**20, batch: int = 1 << 16) -> set:
    """Floor vectors at random rational ``(a, d)`` in ``[0, q)^2``."""
    q = int(q)
    found = set()
    for b, start in enumerate(range(0, samples, batch)):
        rng = substream(seed, b)
        A, E, D = _sample_points(rng, q, min(batch, samples - start), max_den)
        found.update(map(tuple, np.unique(_floors(A, E, D, m), axis=0).tolist()))
    return found


def sample_blue_oracle(coloring: ZqColoring, m: int, trials: int, seed: int, *,
                       max_den: int = 2**20, batch: int = 1 << 16) -> Optional[CellWitness]:
    """Randomized search for an all-blue ``(a, d)``; independent of the arrangement."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    q = coloring.q
    for b, start in enumerate(range(0, trials, batch)):
        rng = substream(seed, b)
        A, E, D = _sample_points(rng, q, min(batch, trials - start), max_den)
        fl = _floors(A, E, D, m)
        blue = ~coloring.red_mask[fl % q].any(axis=1)
        hits = np.flatnonzero(blue)
        if hits.size:
            k = hits[0]
            return _verified(coloring, _witness(fl[k], (A[k], E[k], D[k])))
    return None


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def witness_report(coloring: ZqColoring, m: int, witness: Optional[CellWitness]) -> dict:
    if witness is None:
        return {"q": coloring.q, "m": m, "a": None, "d": None, "indices": None,
                "colors": None, "all_blue": False}
    _, colors = residue_pattern(coloring, witness.progression())
    return {
        "q": coloring.q,
        "m": m,
        "a": _frac(witness.a),
        "d": _frac(witness.d),
        "indices": list(witness.pattern.indices),
        "colors": "".join(c.value for c in colors),
        "all_blue": all(c is Color.BLUE for c in colors),
    }
