"""Spherical red/blue colorings of Euclidean space avoiding red unit triples
and blue long unit progressions, with exact and statistical verifiers."""

__version__ = "0.1.0"

from .coloring import (Color, PrimeModulus, RealLift, ZqColoring, color_point, dumps,
                       generate_random_coloring, lift_real, load, loads, save)
from .red import (RedReduction, RedSolution, brute_force_red_solutions, find_red_solutions,
                  reduce_red_triple, verify_red_free)
from .progression import (CellWitness, IntervalPattern, Progression, enumerate_patterns,
                          pattern_distinct_interval_count, progression_values, residue_pattern,
                          sample_blue_oracle, search_blue_progression, value_bound)
from .equidistribution import (ApproxReal, QuadraticParams, RationalApprox, branch_value_count,
                               count_hit_intervals, distinct_squares_count, find_small_multiple,
                               parse_real, verify_lemma_dist)
from .bounds import (BoundsReport, blue_failure_bound, empirical_expected_red, expected_red_bound,
                     find_sufficient_parameters, sign_pattern_bound)
from .geometry import (LineCopy, SquaredDistSeq, make_line_copy, monte_carlo_blue_scan,
                       monte_carlo_red_check, squared_distances)
