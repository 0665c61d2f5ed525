"""Red/blue colorings of Z_q and their spherical lifts.

A coloring of the residues mod a prime ``q`` is lifted to the nonnegative
reals by ``y -> colors[floor(y) mod q]`` and to R^n by coloring a point with
the lift of its squared Euclidean norm.

Random colorings use numpy's PCG64 bit generator seeded through
``SeedSequence(seed)``. One uniform double is drawn per residue, in residue
order, and residue ``i`` is red iff its draw is below ``p``. The mapping
``(q, seed, p) -> colors`` therefore does not depend on platform or threads.
Consumers that need several independent streams derive them with
``SeedSequence(seed).spawn`` (see :func:`substream`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .primes import is_prime

MAX_SEED = 2**64
HEADER = "zqcoloring v1"


class Color(str, Enum):
    RED = "R"
    BLUE = "B"


class NotPrimeError(ValueError):
    pass


class ColoringFormatError(ValueError):
    """Malformed coloring document."""


class HeaderError(ColoringFormatError):
    pass


class LengthMismatchError(ColoringFormatError):
    pass


class NonPrimeModulusError(ColoringFormatError):
    pass


@dataclass(frozen=True)
class PrimeModulus:
    q: int

    def __post_init__(self):
        q = self.q
        if isinstance(q, bool) or not isinstance(q, int):
            raise TypeError(f"modulus must be an int, got {type(q).__name__}")
        if q >= 2**64:
            raise ValueError(f"modulus {q} exceeds the 64-bit range")
        if not is_prime(q):
            raise NotPrimeError(f"{q} is not prime")
        if q < 5:
            raise ValueError(f"modulus must be at least 5, got {q}")

    def __int__(self) -> int:
        return self.q

    def __index__(self) -> int:
        return self.q


ModulusLike = Union[int, PrimeModulus]


def as_modulus(q: ModulusLike) -> PrimeModulus:
    return q if isinstance(q, PrimeModulus) else PrimeModulus(int(q))


@dataclass(frozen=True)
class Provenance:
    seed: int
    density: Optional[float] = None


class ZqColoring:
    """Immutable red/blue assignment to the residues ``0..q-1``."""

    __slots__ = ("modulus", "provenance", "_red")

    def __init__(self, modulus: ModulusLike, colors, provenance: Optional[Provenance] = None):
        modulus = as_modulus(modulus)
        q = modulus.q
        if isinstance(colors, np.ndarray) and colors.dtype == bool:
            red = colors.copy()
        else:
            if isinstance(colors, str):
                colors = list(colors)
            red = np.array([Color(c) is Color.RED for c in colors], dtype=bool)
        if red.ndim != 1 or red.shape[0] != q:
            raise ValueError(f"expected {q} colors, got {red.shape[0] if red.ndim == 1 else red.shape}")
        red.setflags(write=False)
        object.__setattr__(self, "modulus", modulus)
        object.__setattr__(self, "provenance", provenance)
        object.__setattr__(self, "_red", red)

    def __setattr__(self, name, value):
        raise AttributeError("ZqColoring is immutable")

    @classmethod
    def from_red_set(cls, q: ModulusLike, reds: Iterable[int]) -> "ZqColoring":
        modulus = as_modulus(q)
        mask = np.zeros(modulus.q, dtype=bool)
        for r in reds:
            mask[int(r) % modulus.q] = True
        return cls(modulus, mask)

    @classmethod
    def all_red(cls, q: ModulusLike) -> "ZqColoring":
        modulus = as_modulus(q)
        return cls(modulus, np.ones(modulus.q, dtype=bool))

    @classmethod
    def all_blue(cls, q: ModulusLike) -> "ZqColoring":
        modulus = as_modulus(q)
        return cls(modulus, np.zeros(modulus.q, dtype=bool))

    @property
    def q(self) -> int:
        return self.modulus.q

    @property
    def red_mask(self) -> np.ndarray:
        """Read-only boolean array, ``True`` where the residue is red."""
        return self._red

    @property
    def colors(self) -> tuple:
        return tuple(Color.RED if r else Color.BLUE for r in self._red.tolist())

    def color_string(self) -> str:
        return "".join("R" if r else "B" for r in self._red.tolist())

    def color(self, residue: int) -> Color:
        return Color.RED if self._red[residue % self.q] else Color.BLUE

    def red_residues(self) -> list:
        return np.flatnonzero(self._red).tolist()

    @property
    def red_count(self) -> int:
        return int(self._red.sum())

    def __len__(self) -> int:
        return self.q

    def __eq__(self, other):
        if not isinstance(other, ZqColoring):
            return NotImplemented
        return self.q == other.q and bool(np.array_equal(self._red, other._red))

    def __hash__(self):
        return hash((self.q, self._red.tobytes()))

    def __repr__(self):
        s = self.color_string()
        if len(s) > 40:
            s = s[:37] + "..."
        return f"ZqColoring(q={self.q}, red={self.red_count}, colors={s!r})"


def default_density(q: int) -> float:
    """Red probability ``q**(-3/4)``."""
    return float(q) ** -0.75


def _check_seed(seed: int) -> int:
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise TypeError("seed must be an integer")
    seed = int(seed)
    if not 0 <= seed < MAX_SEED:
        raise ValueError(f"seed must lie in [0, 2**64), got {seed}")
    return seed


def substream(seed: int, *key: int) -> np.random.Generator:
    """Independent generator for the sub-task identified by ``key``."""
    ss = np.random.SeedSequence(_check_seed(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.PCG64(ss))


def generate_random_coloring(q: ModulusLike, seed: int, p: Optional[float] = None) -> ZqColoring:
    """Color each residue red independently with probability ``p``.

    ``p`` defaults to ``q**(-3/4)``.
    """
    modulus = as_modulus(q)
    seed = _check_seed(seed)
    if p is None:
        p = default_density(modulus.q)
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"red probability must lie in [0, 1], got {p}")
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    red = rng.random(modulus.q) < p
    return ZqColoring(modulus, red, Provenance(seed, p))


Exact = Union[int, Fraction]


def _floor(y) -> int:
    if isinstance(y, bool):
        raise TypeError("booleans are not reals")
    if isinstance(y, (int, np.integer)):
        return int(y)
    if isinstance(y, Rational):
        return math.floor(Fraction(y))
    y = float(y)
    if not math.isfinite(y):
        raise ValueError(f"non-finite value {y}")
    return math.floor(y)


@dataclass(frozen=True)
class RealLift:
    """The coloring ``y -> base[floor(y) mod q]`` of the nonnegative reals."""

    base: ZqColoring

    def __call__(self, y) -> Color:
        return lift_real(self, y)


def lift_real(lift: RealLift, y) -> Color:
    """Color of the nonnegative real ``y``.

    Exact (int or Fraction) inputs are floored exactly. Floats are floored as
    the binary value they hold; pass a Fraction when boundary membership
    matters.
    """
    if y < 0:
        raise ValueError(f"lift is defined on y >= 0, got {y}")
    return lift.base.color(_floor(y))


def squared_norm(point: Sequence) -> Union[Fraction, float]:
    if len(point) == 0:
        raise ValueError("point must have dimension >= 1")
    if all(isinstance(x, (int, Rational)) and not isinstance(x, bool) for x in point):
        return sum((Fraction(x) * Fraction(x) for x in point), Fraction(0))
    return math.fsum(float(x) * float(x) for x in point)


def color_point(lift: RealLift, point: Sequence) -> Color:
    """Spherical color of ``point``: the lift of its squared norm."""
    return lift_real(lift, squared_norm(point))


def dumps(coloring: ZqColoring) -> str:
    lines = [HEADER, f"q={coloring.q}"]
    if coloring.provenance is not None:
        lines.append(f"seed={coloring.provenance.seed}")
    lines.append(f"colors={coloring.color_string()}")
    return "\n".join(lines) + "\n"


def _field(line: str, key: str) -> str:
    prefix = key + "="
    if not line.startswith(prefix):
        raise HeaderError(f"expected '{prefix}...', got {line[:40]!r}")
    return line[len(prefix):]


def _decimal(text: str, key: str) -> int:
    if not text.isdigit():
        raise HeaderError(f"{key} must be a nonnegative decimal integer, got {text[:40]!r}")
    return int(text)


def loads(text: str) -> ZqColoring:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0] != HEADER:
        raise HeaderError(f"first line must be {HEADER!r}")
    if len(lines) not in (3, 4):
        raise HeaderError(f"expected 3 or 4 lines, got {len(lines)}")
    q = _decimal(_field(lines[1], "q"), "q")
    seed = None
    if len(lines) == 4:
        seed = _decimal(_field(lines[2], "seed"), "seed")
        if seed >= MAX_SEED:
            raise HeaderError("seed exceeds 64 bits")
    colors = _field(lines[-1], "colors")
    try:
        modulus = PrimeModulus(q)
    except NotPrimeError as exc:
        raise NonPrimeModulusError(str(exc)) from None
    except ValueError as exc:
        raise ColoringFormatError(str(exc)) from None
    if len(colors) != q:
        raise LengthMismatchError(f"q={q} but colors has {len(colors)} characters")
    bad = set(colors) - {"R", "B"}
    if bad:
        raise ColoringFormatError(f"invalid color characters {sorted(bad)}")
    prov = Provenance(seed) if seed is not None else None
    return ZqColoring(modulus, np.frombuffer(colors.encode("ascii"), dtype=np.uint8) == ord("R"), prov)


def save(coloring: ZqColoring, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps(coloring))


def load(path) -> ZqColoring:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())
