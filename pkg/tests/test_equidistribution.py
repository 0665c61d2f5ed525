import itertools
import math
import random
from fractions import Fraction

import mpmath
import pytest

from sphericolor.equidistribution import (ApproxReal, Branch, PrecisionError, QuadraticParams,
                                          RationalApprox, branch_check, branch_value_count,
                                          count_hit_intervals, dilate_intervals,
                                          distinct_squares_count, find_small_multiple, parse_real,
                                          verify_lemma_dist)
from sphericolor.primes import is_prime

BATTERY = ["0", "1/2", "sqrt(2)", "pi", "e", "17/13"]


def mp_smallest_multiple(value: str, q: int) -> int:
    """Brute-force scan of k = 1..q^2 at 50 digits."""
    with mpmath.workdps(50):
        x = {"sqrt(2)": mpmath.sqrt(2), "pi": mpmath.pi, "e": mpmath.e}[value]
        for k in range(1, q * q + 1):
            t = k * x
            if abs(t - q * mpmath.nint(t / q)) <= mpmath.mpf(1) / q:
                return k


def test_parse_real():
    assert parse_real("17/13") == ApproxReal(Fraction(17, 13), 0, "17/13")
    assert parse_real("0.25").center == Fraction(1, 4) and parse_real("0.25").exact
    r = parse_real("sqrt(2)")
    assert abs(r.center - Fraction(14142135623730950488, 10**19)) < Fraction(1, 10**19)
    assert r.radius == Fraction(1, 10**50)
    assert parse_real("sqrt(4)").exact and parse_real("sqrt(4)").center == 2
    with mpmath.workdps(70):
        assert abs(mpmath.mpf(parse_real("pi").center.numerator) / parse_real("pi").center.denominator
                   - mpmath.pi) < mpmath.mpf(10) ** -50
    with pytest.raises(ValueError):
        parse_real("tau")


def test_small_multiple_examples():
    a = find_small_multiple(0, 7)
    assert (a.k, a.eps, a.branch) == (1, 0, Branch.COPRIME)
    a = find_small_multiple(Fraction(1, 5), 5)
    assert a.k == 1 and abs(a.eps) <= Fraction(1, 5)
    a = find_small_multiple(parse_real("sqrt(2)"), 5)
    assert a.k == mp_smallest_multiple("sqrt(2)", 5) == 7
    assert a.branch is Branch.COPRIME


def test_small_multiple_multiple_branch():
    a = find_small_multiple(Fraction(1, 2), 5)
    assert (a.k, a.s, a.r, a.branch) == (10, 2, 1, Branch.MULTIPLE)
    assert a.eps_prime == 0
    a = find_small_multiple(Fraction(2, 3), 7)
    assert (a.k, a.s, a.r, a.branch) == (21, 3, 2, Branch.MULTIPLE)
    assert find_small_multiple(Fraction(17, 13), 13).branch is Branch.COPRIME


def test_pigeonhole_guarantee():
    rng = random.Random(5)
    alphas = [Fraction(rng.randint(-10**6, 10**6), rng.randint(1, 10**4)) for _ in range(70)]
    alphas += [parse_real(f"sqrt({n})") for n in range(2, 32) if math.isqrt(n) ** 2 != n][:30]
    for q in (5, 7, 11, 13):
        for alpha in alphas:
            a = find_small_multiple(alpha, q)
            center = alpha.center if isinstance(alpha, ApproxReal) else alpha
            assert 1 <= a.k <= q * q and abs(a.eps) <= Fraction(1, q)
            assert a.k * center == a.r * q + a.eps
            if a.branch is Branch.MULTIPLE:
                assert a.k == a.s * q and math.gcd(a.r, a.s) == 1
                assert abs(a.eps_prime) <= Fraction(1, q * q)
                assert a.eps_prime == center - Fraction(a.r, a.s)


@pytest.mark.parametrize("name", ["sqrt(2)", "pi", "e"])
@pytest.mark.parametrize("q", [5, 7, 11, 13])
def test_small_multiple_matches_scan(name, q):
    assert find_small_multiple(parse_real(name), q).k == mp_smallest_multiple(name, q)


def test_precision_guard():
    coarse = ApproxReal(Fraction(1414, 1000), Fraction(1, 100))
    with pytest.raises(PrecisionError):
        find_small_multiple(coarse, 5)
    ambiguous = QuadraticParams(ApproxReal(0), ApproxReal(Fraction(1), Fraction(1, 10**60)))
    with pytest.raises(PrecisionError):
        count_hit_intervals(ambiguous, 5, 3)


def test_count_hit_examples():
    assert count_hit_intervals(QuadraticParams(0, 0), 5, 125) == 3
    assert count_hit_intervals(QuadraticParams(0, Fraction(1, 2)), 5, 125) == 3
    assert count_hit_intervals(QuadraticParams(0, 0), 7, 343) == 4
    with pytest.raises(ValueError):
        count_hit_intervals(QuadraticParams(0, 0), 7, 0)


def test_count_hit_against_float_oracle():
    # Exact rationals with small denominators stay far from float trouble.
    for alpha, beta in [(Fraction(3, 7), Fraction(1, 3)), (Fraction(-5, 4), Fraction(2, 9))]:
        m, q = 300, 11
        oracle = {math.floor(i * i + float(alpha) * i + float(beta)) % q for i in range(1, m + 1)}
        assert count_hit_intervals(QuadraticParams(alpha, beta), q, m) == len(oracle)


def test_verify_lemma_examples():
    assert verify_lemma_dist(QuadraticParams(0, 0), 5) == (3, True)
    assert verify_lemma_dist(QuadraticParams(0, 0), 7) == (4, True)
    assert verify_lemma_dist(QuadraticParams(parse_real("sqrt(2)"), parse_real("pi")), 11)[1]
    with pytest.raises(ValueError):
        verify_lemma_dist(QuadraticParams(0, 0), 1009)


def test_distinct_squares():
    assert distinct_squares_count(5) == 3
    assert distinct_squares_count(7) == 4
    assert distinct_squares_count(3) == 2
    for q in range(3, 1000, 2):
        if is_prime(q):
            assert distinct_squares_count(q) == (q + 1) // 2


def _multiple(s, r):
    return RationalApprox(k=s * 5, r=r, s=s, eps=Fraction(0), branch=Branch.MULTIPLE, eps_prime=Fraction(0))


def test_branch_value_count_examples():
    assert branch_value_count(_multiple(1, 0), 5) == 3
    assert branch_value_count(_multiple(1, 1), 5) == 3
    for s in range(1, 7):
        for r in range(7):
            if math.gcd(r, s) == 1:
                assert branch_value_count(_multiple(s, r), 7) >= 4
    with pytest.raises(ValueError):
        branch_value_count(find_small_multiple(0, 5), 5)


def test_dilation_bound():
    rng = random.Random(1)
    for _ in range(200):
        q = rng.choice([5, 7, 11, 13])
        s = set(rng.sample(range(q), rng.randint(0, q)))
        assert len(dilate_intervals(s, q)) <= 3 * len(s)


@pytest.mark.parametrize("q", [5, 7, 11, 13])
def test_branch_chain(q):
    vals = [parse_real(v) for v in BATTERY]
    branches = set()
    for alpha, beta in itertools.product(vals, vals):
        params = QuadraticParams(alpha, beta)
        check = branch_check(params, q)
        branches.add(check.approx.branch)
        assert 2 * len(check.reference_hits) >= q
        assert check.max_shift <= 1
        assert check.reference_hits <= dilate_intervals(check.actual_hits, q)
        assert 3 * len(check.actual_hits) >= len(check.reference_hits)
        assert check.holds(q)
    assert branches == {Branch.COPRIME, Branch.MULTIPLE}
