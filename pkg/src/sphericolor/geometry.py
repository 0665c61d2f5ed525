"""Unit-step line copies in E^n and Monte Carlo checks of the spherical coloring.

Random copies are built with exact rational coordinates:

* base point: every coordinate ``B_k / Db`` with ``Db`` uniform in
  ``[1, 2^16]`` and ``B_k`` uniform in ``[-bound*Db, bound*Db]``;
* direction: inverse stereographic projection of an integer vector
  ``(v, t)``, i.e. ``(2 t v, |v|^2 - t^2) / (|v|^2 + t^2)``, which has norm
  exactly one.

Point ``i`` is ``P_i / (Db*Du)`` for an integer vector ``P_i``, so every
squared norm is the exact rational ``|P_i|^2 / (Db*Du)^2``. Integer dot
products are evaluated exactly in numpy by splitting int64 entries into
21-bit limbs.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Optional, Sequence

import numpy as np

from .coloring import ZqColoring, substream
from .progression import (DEFAULT_MAX_M, DEFAULT_MAX_Q, Progression, residue_pattern,
                          search_blue_progression)
from .red import verify_red_free
from .coloring import Color

FLOAT_UNIT_TOL = 1e-12
BOUNDARY_TOL = 1e-9
# Generous bound on the relative float error of a length-n sum of squares.
_ROUNDING = 64 * np.finfo(float).eps
MAX_BASE_DEN = 2**16
DIRECTION_RANGE = 16
_LIMB = 21
_MASK = (1 << _LIMB) - 1


def _is_exact(x) -> bool:
    return isinstance(x, (int, Rational)) and not isinstance(x, bool)


@dataclass(frozen=True)
class LineCopy:
    base: tuple
    direction: tuple
    m: int

    @property
    def n(self) -> int:
        return len(self.base)

    @property
    def exact(self) -> bool:
        return all(_is_exact(x) for x in self.base + self.direction)

    @property
    def points(self) -> list:
        return [tuple(b + i * u for b, u in zip(self.base, self.direction)) for i in range(self.m)]


@dataclass(frozen=True)
class SquaredDistSeq:
    x_sq: tuple

    def identity_residuals(self) -> list:
        """``x_{i-1} + x_{i+1} - 2 x_i - 2`` for each interior index."""
        x = self.x_sq
        return [x[i - 1] + x[i + 1] - 2 * x[i] - 2 for i in range(1, len(x) - 1)]

    def identity_holds(self, rel_tol: float = 0.0) -> bool:
        x = self.x_sq
        for i in range(1, len(x) - 1):
            lhs, rhs = x[i - 1] + x[i + 1], 2 * x[i] + 2
            if rel_tol == 0.0:
                if lhs != rhs:
                    return False
            elif abs(lhs - rhs) > rel_tol * max(abs(lhs), abs(rhs), 1.0):
                return False
        return True


def make_line_copy(base: Sequence, direction: Sequence, m: int) -> LineCopy:
    """``m`` points ``base + (i-1)*direction`` with unit spacing."""
    if len(base) == 0 or len(base) != len(direction):
        raise ValueError("base and direction must be nonempty and of equal dimension")
    if m < 2:
        raise ValueError(f"m must be at least 2, got {m}")
    if all(_is_exact(x) for x in direction):
        base_t = tuple(Fraction(x) if _is_exact(x) else float(x) for x in base)
        direction_t = tuple(Fraction(x) for x in direction)
        if sum(u * u for u in direction_t) != 1:
            raise ValueError("direction is not an exact unit vector")
    else:
        base_t = tuple(float(x) for x in base)
        direction_t = tuple(float(x) for x in direction)
        if abs(math.sqrt(math.fsum(u * u for u in direction_t)) - 1.0) > FLOAT_UNIT_TOL:
            raise ValueError("direction is not a unit vector")
    return LineCopy(base_t, direction_t, int(m))


def squared_distances(copy: LineCopy) -> SquaredDistSeq:
    out = []
    for p in copy.points:
        if all(_is_exact(x) for x in p):
            out.append(sum((x * x for x in p), Fraction(0)))
        else:
            out.append(math.fsum(float(x) * float(x) for x in p))
    return SquaredDistSeq(tuple(out))


def _limbs(x: np.ndarray):
    return x & _MASK, (x >> _LIMB) & _MASK, x >> (2 * _LIMB)


def exact_sq_norms(P: np.ndarray) -> list:
    """Exact ``sum(P[..., k]^2)`` over the last axis, as Python ints.

    Entries must satisfy ``|x| < 2^62`` and the last axis must be shorter
    than ``2^18`` so that every limb partial sum fits in int64.
    """
    if P.shape[-1] >= 1 << 18:
        raise ValueError("dimension too large for limb arithmetic")
    if P.size and int(np.abs(P).max()) >= 1 << 62:
        raise OverflowError("coordinates exceed 2^62")
    x = _limbs(P)
    groups = [0] * 5
    for a in range(3):
        for b in range(a, 3):
            s = (x[a] * x[b]).sum(axis=-1)
            groups[a + b] = groups[a + b] + (s if a == b else 2 * s)
    cols = [g.ravel().tolist() for g in groups]
    flat = [g0 + (g1 << 21) + (g2 << 42) + (g3 << 63) + (g4 << 84) for g0, g1, g2, g3, g4 in zip(*cols)]
    if P.ndim == 1:
        return flat[0]
    return np.array(flat, dtype=object).reshape(P.shape[:-1]).tolist()


@dataclass
class CopyBatch:
    """Integer form of ``T`` random copies: point ``i`` of row ``t`` is ``P[t, i] / S[t]``."""

    P: np.ndarray
    scale: np.ndarray

    def exact_squared_norms(self):
        """Per copy, numerators ``|P_i|^2`` and the common denominator ``S^2``."""
        nums = exact_sq_norms(self.P)
        dens = [s * s for s in self.scale.tolist()]
        return nums, dens

    def float_points(self) -> np.ndarray:
        return self.P.astype(float) / self.scale.astype(float)[:, None, None]


def sample_copies(rng: np.random.Generator, T: int, n: int, m: int, bound: int) -> CopyBatch:
    if n < 2:
        raise ValueError("dimension must be at least 2")
    Db = rng.integers(1, MAX_BASE_DEN + 1, size=T, dtype=np.int64)
    B = rng.integers(-bound * Db[:, None], bound * Db[:, None] + 1, size=(T, n), dtype=np.int64)
    v = rng.integers(-DIRECTION_RANGE, DIRECTION_RANGE + 1, size=(T, n - 1), dtype=np.int64)
    t = rng.integers(1, DIRECTION_RANGE + 1, size=T, dtype=np.int64)
    vv = (v * v).sum(axis=1)
    Du = vv + t * t
    U = np.concatenate([2 * t[:, None] * v, (vv - t * t)[:, None]], axis=1)
    steps = np.arange(m, dtype=np.int64)
    P = Du[:, None, None] * B[:, None, :] + steps[None, :, None] * (Db[:, None] * U)[:, None, :]
    return CopyBatch(P, Db * Du)


def _batches(trials: int, n: int, m: int) -> list:
    size = max(1, min(4096, (1 << 21) // (n * m)))
    return [(b, min(size, trials - s)) for b, s in enumerate(range(0, trials, size))]


def _run(fn, jobs, threads: Optional[int]):
    if threads and threads > 1:
        with ThreadPoolExecutor(threads) as ex:
            return list(ex.map(fn, jobs))
    return [fn(j) for j in jobs]


def identity_check(trials: int, n: int, m: int, seed: int, *, exact: bool = True, bound: int = 10,
                   rel_tol: float = 1e-9, threads: Optional[int] = None) -> dict:
    """Check the second-difference identity of squared norms on random copies."""

    def job(batch):
        b, size = batch
        batch = sample_copies(substream(seed, b), size, n, m, bound)
        bad = 0
        if exact:
            nums, dens = batch.exact_squared_norms()
            for x, den in zip(nums, dens):
                two = 2 * den
                bad += any(x[i - 1] + x[i + 1] != 2 * x[i] + two for i in range(1, m - 1))
        else:
            pts = batch.float_points()
            sq = (pts * pts).sum(axis=2)
            lhs, rhs = sq[:, :-2] + sq[:, 2:], 2 * sq[:, 1:-1] + 2
            scale = np.maximum(np.maximum(np.abs(lhs), np.abs(rhs)), 1.0)
            bad = int((np.abs(lhs - rhs) > rel_tol * scale).any(axis=1).sum())
        return bad

    failures = sum(_run(job, _batches(trials, n, m), threads))
    return {"n": n, "m": m, "trials": trials, "exact": exact, "identity_failures": int(failures)}


def scan_copies(coloring: ZqColoring, n: int, m: int, trials: int, seed: int, *, exact: bool = True,
                threads: Optional[int] = None) -> dict:
    """Color random copies and count the monochromatic ones, without preconditions."""
    all_red, all_blue, skipped, _ = _scan(coloring, n, m, trials, seed, exact, threads, False)
    return {"n": n, "m": m, "trials": trials, "all_red": all_red, "all_blue": all_blue,
            "boundary_skipped": skipped}


def _scan(coloring: ZqColoring, n: int, m: int, trials: int, seed: int, exact: bool,
          threads: Optional[int], keep_hits: bool):
    q, red = coloring.q, coloring.red_mask

    def job(batch):
        b, size = batch
        batch = sample_copies(substream(seed, b), size, n, m, q)
        hits = []
        if exact:
            nums, dens = batch.exact_squared_norms()
            idx = np.array([[x // den % q for x in row] for row, den in zip(nums, dens)], dtype=np.int64)
            skipped = np.zeros(size, dtype=bool)
        else:
            pts = batch.float_points()
            sq = (pts * pts).sum(axis=2)
            margin = np.maximum(BOUNDARY_TOL, _ROUNDING * n * sq)
            near = np.abs(sq - np.round(sq)) < margin
            skipped = near.any(axis=1)
            idx = np.floor(sq).astype(np.int64) % q
        r = red[idx]
        all_red = r.all(axis=1) & ~skipped
        all_blue = ~r.any(axis=1) & ~skipped
        if keep_hits and exact:
            for k in np.flatnonzero(all_blue).tolist():
                hits.append((Fraction(nums[k][0], dens[k]), Fraction(nums[k][1], dens[k])))
        return int(all_red.sum()), int(all_blue.sum()), int(skipped.sum()), hits

    parts = _run(job, _batches(trials, n, m), threads)
    hits = [h for p in parts for h in p[3]]
    return (sum(p[0] for p in parts), sum(p[1] for p in parts), sum(p[2] for p in parts), hits)


class PreconditionError(ValueError):
    pass


def monte_carlo_red_check(coloring: ZqColoring, n: int, trials: int, seed: int, *,
                          exact: bool = True, threads: Optional[int] = None) -> dict:
    """Count all-red unit triples among random copies; a red-free coloring must give 0."""
    if n < 2:
        raise ValueError("dimension must be at least 2")
    if not verify_red_free(coloring):
        raise PreconditionError("coloring has red solutions; the red check would be meaningless")
    all_red, all_blue, skipped, _ = _scan(coloring, n, 3, trials, seed, exact, threads, False)
    return {"n": n, "m": 3, "trials": trials, "all_red": all_red, "all_blue": all_blue,
            "boundary_skipped": skipped}


def progression_of(x1_sq: Fraction, x2_sq: Fraction, q: int, m: int) -> Progression:
    """Progression parameters of a copy, reduced into ``[0, q)^2``."""
    return Progression(x1_sq % q, (x2_sq - x1_sq) % q, m)


def monte_carlo_blue_scan(coloring: ZqColoring, n: int, m: int, trials: int, seed: int, *,
                          exact: bool = True, certify: bool = False, threads: Optional[int] = None,
                          max_m: int = DEFAULT_MAX_M, max_q: int = DEFAULT_MAX_Q) -> dict:
    """Count all-blue copies of the length-m progression among random copies.

    Every exact hit is mapped back to progression parameters and must give an
    all-blue residue pattern. With ``certify`` the arrangement search is run
    too; a certified blue-free coloring must produce no hits.
    """
    if n < 2:
        raise ValueError("dimension must be at least 2")
    if m < 2:
        raise ValueError("m must be at least 2")
    all_red, all_blue, skipped, hits = _scan(coloring, n, m, trials, seed, exact, threads, True)
    bad = 0
    for x1, x2 in hits:
        _, colors = residue_pattern(coloring, progression_of(x1, x2, coloring.q, m))
        bad += any(c is not Color.BLUE for c in colors)
    report = {"n": n, "m": m, "trials": trials, "all_red": all_red, "all_blue": all_blue,
              "boundary_skipped": skipped, "hit_consistency_failures": bad}
    if certify:
        witness = search_blue_progression(coloring, m, max_m=max_m, max_q=max_q)
        report["certified_blue_free"] = witness is None
    return report
