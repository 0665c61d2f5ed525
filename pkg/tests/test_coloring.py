from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sphericolor.coloring import (Color, ColoringFormatError, HeaderError, LengthMismatchError,
                                  NonPrimeModulusError, NotPrimeError, PrimeModulus, RealLift,
                                  ZqColoring, color_point, dumps, generate_random_coloring,
                                  lift_real, load, loads, save)
from sphericolor.primes import is_prime, next_prime


def _sieve(n):
    s = [True] * (n + 1)
    s[0] = s[1] = False
    for i in range(2, int(n**0.5) + 1):
        if s[i]:
            s[i * i::i] = [False] * len(s[i * i::i])
    return s


def test_is_prime_matches_sieve():
    s = _sieve(20000)
    assert [is_prime(i) for i in range(20001)] == s


@pytest.mark.parametrize("n, expected", [
    (2**61 - 1, True),                 # Mersenne prime
    (2**64 - 59, True),                # largest 64-bit prime
    (3215031751, False),               # strong pseudoprime to bases 2, 3, 5, 7
    (3825123056546413051, False),      # strong pseudoprime to bases up to 23
])
def test_is_prime_hard_cases(n, expected):
    assert is_prime(n) is expected


def test_next_prime():
    assert next_prime(331776) == 331777
    assert next_prime(7) == 11


def test_prime_modulus_validation():
    assert int(PrimeModulus(5)) == 5
    with pytest.raises(NotPrimeError):
        PrimeModulus(9)
    with pytest.raises(ValueError):
        PrimeModulus(3)
    with pytest.raises(TypeError):
        PrimeModulus(5.0)


def test_generation_is_deterministic():
    a = generate_random_coloring(5, 12345)
    b = generate_random_coloring(5, 12345)
    assert a == b and a.provenance.seed == 12345
    assert generate_random_coloring(101, 1) != generate_random_coloring(101, 2)


def test_generation_frozen_values():
    # Pins the seed -> colors mapping of the documented generator.
    assert generate_random_coloring(101, 7).color_string() == _expected_101_7()


def _expected_101_7():
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(7)))
    return "".join("R" if u < 101**-0.75 else "B" for u in rng.random(101))


def test_red_frequency_q5():
    p = 5**-0.75
    counts = np.zeros(5)
    seeds = 100_000
    for s in range(seeds):
        counts += generate_random_coloring(5, s).red_mask
    assert np.all(np.abs(counts / seeds - p) < 0.01)
    assert abs(p - 0.29907) < 1e-5


def test_mean_red_count_q101():
    seeds = 10_000
    mean = np.mean([generate_random_coloring(101, s).red_count for s in range(seeds)])
    assert abs(mean - 101**0.25) / 101**0.25 < 0.03


def test_density_override():
    assert generate_random_coloring(7, 0, p=0.0) == ZqColoring.all_blue(7)
    assert generate_random_coloring(7, 0, p=1.0) == ZqColoring.all_red(7)
    with pytest.raises(ValueError):
        generate_random_coloring(7, 0, p=1.5)
    with pytest.raises(ValueError):
        generate_random_coloring(7, -1)


def test_coloring_is_immutable():
    c = ZqColoring.all_blue(5)
    with pytest.raises(AttributeError):
        c.modulus = PrimeModulus(7)
    with pytest.raises(ValueError):
        c.red_mask[0] = True
    with pytest.raises(ValueError):
        ZqColoring(5, "RRBB")


def test_lift_real_examples():
    c = ZqColoring(7, "RBBRBBB")
    lift = RealLift(c)
    assert lift_real(lift, 0) is Color.RED
    assert lift_real(lift, Fraction(15, 2)) is Color.RED  # floor(7.5) = 7 = 0 mod 7
    assert lift_real(lift, 3.99) is Color.RED
    assert lift_real(lift, Fraction(399, 100)) is Color.RED
    assert lift_real(lift, 4) is Color.BLUE
    with pytest.raises(ValueError):
        lift_real(lift, Fraction(-1, 2))


def test_color_point_examples():
    c = ZqColoring(7, "RBBRBBB")
    lift = RealLift(c)
    assert color_point(lift, (0, 0, 0, 0)) is lift_real(lift, 0)
    assert color_point(lift, (1, 1, 1)) is c.color(3)
    assert color_point(lift, (Fraction(1, 2), Fraction(1, 2))) is c.color(0)
    with pytest.raises(ValueError):
        color_point(lift, ())


@settings(max_examples=200)
@given(st.fractions(min_value=0, max_value=10**6), st.integers(0, 2**32))
def test_lift_periodicity(y, seed):
    lift = RealLift(generate_random_coloring(11, seed, p=0.5))
    assert lift(y) is lift(y + 11)


@settings(max_examples=100)
@given(st.lists(st.fractions(-50, 50, max_denominator=1000), min_size=3, max_size=3),
       st.integers(0, 2**32))
def test_spherical_property(v, seed):
    # A signed permutation preserves the norm.
    lift = RealLift(generate_random_coloring(13, seed, p=0.5))
    w = [-v[2], v[0], -v[1]]
    assert color_point(lift, v) is color_point(lift, w)


def test_roundtrip(tmp_path):
    c = generate_random_coloring(101, 99)
    text = dumps(c)
    assert text.splitlines()[:3] == ["zqcoloring v1", "q=101", "seed=99"]
    back = loads(text)
    assert back == c and back.provenance.seed == 99
    hand = ZqColoring(5, "RBBRB")
    assert dumps(hand) == "zqcoloring v1\nq=5\ncolors=RBBRB\n"
    assert loads(dumps(hand)) == hand and loads(dumps(hand)).provenance is None
    save(c, tmp_path / "c.txt")
    assert load(tmp_path / "c.txt") == c


@pytest.mark.parametrize("text, error", [
    ("zqcoloring v1\nq=5\ncolors=RBBR\n", LengthMismatchError),
    ("zqcoloring v1\nq=9\ncolors=RBBRBBBBB\n", NonPrimeModulusError),
    ("zqcoloring v2\nq=5\ncolors=RBBRB\n", HeaderError),
    ("zqcoloring v1\nQ=5\ncolors=RBBRB\n", HeaderError),
    ("zqcoloring v1\nq=5\nseed=x\ncolors=RBBRB\n", HeaderError),
    ("zqcoloring v1\nq=5\ncolors=RBBXB\n", ColoringFormatError),
])
def test_parse_errors(text, error):
    with pytest.raises(error):
        loads(text)


def test_parse_errors_are_distinct():
    assert len({LengthMismatchError, NonPrimeModulusError, HeaderError}) == 3
    assert not issubclass(LengthMismatchError, NonPrimeModulusError)
