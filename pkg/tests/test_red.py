import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from sphericolor.coloring import Color, RealLift, ZqColoring, generate_random_coloring
from sphericolor.red import (ReductionContradiction, RedSolution, brute_force_red_solutions,
                             find_red_solutions, reduce_red_triple, verification_report,
                             verify_red_free)


def test_all_blue_has_no_solutions():
    c = ZqColoring.all_blue(7)
    assert all(find_red_solutions(c, k) == [] for k in (1, 2, 3))
    assert verify_red_free(c)


def test_all_red_counts():
    assert len(find_red_solutions(ZqColoring.all_red(5), 1)) == 25
    assert len(brute_force_red_solutions(ZqColoring.all_red(7), 2)) == 49
    assert not verify_red_free(ZqColoring.all_red(5))


def test_single_red_residue():
    assert find_red_solutions(ZqColoring.from_red_set(5, [0]), 1) == []
    assert verify_red_free(ZqColoring.from_red_set(5, [1]))


def test_offset_validation():
    with pytest.raises(ValueError):
        find_red_solutions(ZqColoring.all_red(5), 0)
    with pytest.raises(ValueError):
        brute_force_red_solutions(ZqColoring.all_red(5), 4)


def test_lexicographic_order():
    sols = find_red_solutions(ZqColoring.all_red(7), 3)
    assert sols == sorted(sols)


@settings(max_examples=300)
@given(st.sampled_from([5, 7, 11, 13]), st.integers(0, 2**40), st.sampled_from([0.2, 0.5, 0.8]),
       st.sampled_from([1, 2, 3]))
def test_oracle_equivalence(q, seed, p, c):
    col = generate_random_coloring(q, seed, p)
    assert set(find_red_solutions(col, c)) == set(brute_force_red_solutions(col, c))


def test_solutions_satisfy_invariant():
    col = generate_random_coloring(13, 3, 0.6)
    for s in find_red_solutions(col, 2):
        assert (s.y1 + s.y3 - 2 * s.y2 - s.c) % 13 == 0
        assert all(col.color(y) is Color.RED for y in (s.y1, s.y2, s.y3))


@pytest.mark.parametrize("q", [5, 7, 11, 13, 101])
def test_degenerate_solution_count(q):
    for c in (1, 2, 3):
        sols = find_red_solutions(ZqColoring.all_red(q), c)
        degenerate = [s for s in sols if len({s.y1, s.y2, s.y3}) < 3]
        assert len(degenerate) <= 3 * q


def test_reduce_examples():
    r = reduce_red_triple(0, 0, 2)
    assert (r.n1, r.n2, r.n3, r.c) == (0, 0, 2, 2)
    r = reduce_red_triple(Fraction(1, 2), 1, Fraction(7, 2))
    assert (r.n1, r.n2, r.n3, r.c) == (0, 1, 3, 1)
    assert r.eps1 == Fraction(1, 2) and r.eps3 == Fraction(1, 2)
    with pytest.raises(ValueError):
        reduce_red_triple(Fraction(3, 4), Fraction(5, 4), 3)
    with pytest.raises(TypeError):
        reduce_red_triple(0.5, 1, 3.5)


def _random_triple(rng):
    den = rng.randint(1, 50)
    y2 = Fraction(rng.randint(0, 2000), den)
    y1 = Fraction(rng.randint(0, int((2 * y2 + 2) * den)), den)
    return y1, y2, 2 * y2 + 2 - y1


def test_reduction_soundness():
    rng = random.Random(2024)
    for _ in range(10_000):
        y1, y2, y3 = _random_triple(rng)
        r = reduce_red_triple(y1, y2, y3)
        assert r.c in (1, 2, 3) and r.n1 + r.n3 == 2 * r.n2 + r.c
        assert abs(2 * r.eps2 - r.eps1 - r.eps3) < 2


def test_reduction_hits_every_offset():
    seen = {reduce_red_triple(*t).c for t in [(0, 0, 2), (Fraction(1, 2), 1, Fraction(7, 2)),
                                            (Fraction(2, 5), Fraction(9, 10), Fraction(17, 5))]}
    assert seen == {1, 2, 3}


def test_contradiction_is_an_assertion():
    assert issubclass(ReductionContradiction, AssertionError)


def test_end_to_end_red_soundness():
    col = generate_random_coloring(101, 2802, 0.08)
    assert verify_red_free(col) and col.red_count == 8
    lift = RealLift(col)
    rng = random.Random(7)
    reds = col.red_residues()
    for _ in range(20_000):
        # Bias toward red intervals so that two-red triples are common.
        den = rng.randint(1, 40)
        y1 = rng.choice(reds) + 101 * rng.randint(0, 20) + Fraction(rng.randrange(den), den)
        y2 = rng.choice(reds) + 101 * rng.randint(0, 20) + Fraction(rng.randrange(den), den)
        y3 = 2 * y2 + 2 - y1
        if y3 < 0:
            continue
        assert Color.BLUE in (lift(y1), lift(y2), lift(y3))


def test_report():
    rep = verification_report(ZqColoring.all_red(5))
    assert rep["q"] == 5 and rep["c_checked"] == [1, 2, 3] and rep["red_count"] == 5
    assert len(rep["solutions"]) == 75 and rep["red_free"] is False
    assert verification_report(ZqColoring.all_blue(5))["red_free"] is True
