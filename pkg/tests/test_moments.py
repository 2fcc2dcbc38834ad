import math

import numpy as np
import pytest

from hoalab.errors import TruncationWarning
from hoalab.moments import antinormal_moment, factorial_moment, moment_vector
from hoalab.numerics import falling_factorial, pochhammer
from hoalab.states import (
    build_binomial,
    build_gbs,
    build_geometric,
    build_hs,
    build_nbs,
    build_pacs,
    build_rbs,
    min_allowed_L,
)


class TestFactorialMoment:
    def test_order_zero_is_total_mass(self):
        for pnd in (build_binomial(0.3, 7), build_geometric(0.5), build_rbs(4)):
            assert factorial_moment(pnd, 0) == pytest.approx(pnd.total(), abs=0.0)

    def test_binomial_closed_value(self):
        # M!/(M-l)! p^l with M=10, p=0.5, l=2: 90 * 0.25
        pnd = build_binomial(0.5, 10)
        assert factorial_moment(pnd, 2) == pytest.approx(22.5, rel=1e-13)

    def test_number_state(self):
        pnd = build_binomial(1.0, 3)
        assert factorial_moment(pnd, 2) == pytest.approx(6.0, rel=1e-14)

    def test_orders_beyond_support_vanish(self):
        pnd = build_binomial(0.5, 2)
        assert factorial_moment(pnd, 3) == 0.0

    def test_binomial_ladder_formula_grid(self):
        # <N^(l)> = M!/(M-l)! p^l across p and M
        for p in np.arange(0.1, 0.95, 0.1):
            for M in (2, 5, 11, 19, 30):
                pnd = build_binomial(float(p), M)
                for l in range(0, M + 1):
                    expected = falling_factorial(float(M), l) * p**l
                    got = factorial_moment(pnd, l)
                    assert got == pytest.approx(expected, rel=1e-10), (p, M, l)

    def test_hypergeometric_falling_factorial_formula(self):
        # <N^(l)> = ff(M,l) ff(L eta, l) / ff(L, l)
        for M in (3, 6, 10):
            for eta in (0.2, 0.5, 0.8):
                for factor in (1.0, 10.0):
                    L = factor * min_allowed_L(M, eta)
                    pnd = build_hs(L, M, eta)
                    for l in range(1, M + 1):
                        expected = (
                            falling_factorial(float(M), l)
                            * falling_factorial(L * eta, l)
                            / falling_factorial(L, l)
                        )
                        assert factorial_moment(pnd, l) == pytest.approx(
                            expected, rel=1e-9
                        ), (M, eta, factor, l)

    def test_gbs_pochhammer_formula(self):
        # <N^(l)> = ff(N,l) (alpha+1)_l / (alpha+beta+2)_l
        for N, alpha, beta in [(10, 2.0, 1.0), (8, -0.5, 3.0), (15, 0.0, 0.0)]:
            pnd = build_gbs(N, alpha, beta)
            for l in range(1, N + 1):
                expected = (
                    falling_factorial(float(N), l)
                    * pochhammer(alpha + 1.0, l)
                    / pochhammer(alpha + beta + 2.0, l)
                )
                assert factorial_moment(pnd, l) == pytest.approx(expected, rel=1e-10)


class TestAntinormalMoment:
    def test_vacuum_gives_factorials(self):
        pnd = build_binomial(0.0, 4)
        for l in range(6):
            assert antinormal_moment(pnd, l) == pytest.approx(
                math.factorial(l), rel=1e-14
            )

    def test_order_one_is_mean_plus_one(self):
        for pnd in (build_binomial(0.6, 9), build_rbs(5), build_geometric(0.4)):
            mean = factorial_moment(pnd, 1)
            assert antinormal_moment(pnd, 1) == pytest.approx(mean + 1.0, rel=1e-12)

    def test_geometric_closed_value(self):
        # sum 0.5^(n+1) (n+1)(n+2) = 2/eta^2 = 8
        pnd = build_geometric(0.5)
        assert antinormal_moment(pnd, 2) == pytest.approx(8.0, rel=1e-12)


class TestMomentVector:
    def test_binomial_both_families(self):
        mv = moment_vector(build_binomial(0.5, 2), 2)
        assert mv.normal == pytest.approx([1.0, 1.0, 0.5], rel=1e-13)
        # by-hand sums over [0.25, 0.5, 0.25]:
        # order 1: 0.25*1 + 0.5*2 + 0.25*3 = 2
        # order 2: 0.25*2 + 0.5*6 + 0.25*12 = 6.5
        assert mv.antinormal == pytest.approx([1.0, 2.0, 6.5], rel=1e-13)

    def test_vacuum(self):
        mv = moment_vector(build_binomial(0.0, 3), 3)
        assert mv.normal == pytest.approx([1.0, 0.0, 0.0, 0.0], abs=1e-15)

    def test_uniform_three_point(self):
        mv = moment_vector(build_gbs(2, 0.0, 0.0), 2)
        assert mv.normal == pytest.approx([1.0, 1.0, 2.0 / 3.0], rel=1e-13)

    def test_matches_individual_calls(self):
        pnd = build_nbs(0.45, 3)
        mv = moment_vector(pnd, 4)
        for l in range(5):
            assert mv.normal[l] == factorial_moment(pnd, l)
            assert mv.antinormal[l] == antinormal_moment(pnd, l)

    def test_ordering_identity_order_two(self):
        # <a^2 a+^2> = <N(N-1)> + 4<N> + 2 on every sampled state
        pnds = [
            build_binomial(0.5, 10),
            build_gbs(8, 2.0, 1.0),
            build_rbs(6),
            build_nbs(0.5, 2),
            build_geometric(0.3),
            build_pacs(1.5, 3),
            build_hs(8.0, 4, 0.5),
        ]
        for pnd in pnds:
            mv = moment_vector(pnd, 2)
            expected = mv.normal[2] + 4.0 * mv.normal[1] + 2.0
            assert mv.antinormal[2] == pytest.approx(expected, rel=1e-10)

    def test_monotone_bound_finite_support(self):
        for pnd in (build_binomial(0.7, 12), build_rbs(9), build_hs(20.0, 6, 0.4)):
            mv = moment_vector(pnd, 6)
            for l in range(6):
                assert mv.normal[l + 1] <= pnd.n_max * mv.normal[l] + 1e-12


class TestTruncationWarning:
    def test_coarse_tail_warns_on_high_moment(self):
        pnd = build_geometric(0.1, tail_tol=1e-6)
        with pytest.warns(TruncationWarning):
            factorial_moment(pnd, 3)

    def test_exact_distribution_never_warns(self):
        import warnings

        pnd = build_binomial(0.5, 12)
        with warnings.catch_warnings():
            warnings.simplefilter("error", TruncationWarning)
            factorial_moment(pnd, 6)

    def test_vector_carries_flag(self):
        import warnings

        pnd = build_geometric(0.1, tail_tol=1e-6)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", TruncationWarning)
            mv = moment_vector(pnd, 4)
        assert mv.truncation_warning
