import json
import math

import numpy as np
import pytest

from hoalab.closedform import (
    closed_form_d,
    crosscheck,
    crosscheck_family,
    d_bs_closed,
    d_gbs_closed,
    d_gs_closed,
    d_hs_closed,
    d_nbs_closed,
    d_pacs_closed,
    d_rbs_closed,
    merge_reports,
)
from hoalab.criteria import d_criterion
from hoalab.errors import ConstraintError, ConvergenceError
from hoalab.states import (
    Binomial,
    Geometric,
    Hypergeometric,
    build_binomial,
    build_gbs,
    build_hs,
    min_allowed_L,
)


class TestBinomialClosed:
    def test_hand_value(self):
        # 90 * 0.25 - 25
        assert d_bs_closed(0.5, 10, 1) == pytest.approx(-2.5, abs=1e-12)

    def test_p_zero(self):
        assert d_bs_closed(0.0, 10, 2) == 0.0

    def test_p_one(self):
        # 2!/0! - 4
        assert d_bs_closed(1.0, 2, 1) == pytest.approx(-2.0, abs=1e-12)

    def test_order_cap(self):
        with pytest.raises(ConstraintError):
            d_bs_closed(0.5, 3, 3)

    def test_matches_oracle(self):
        for p in (0.3, 0.7):
            for M in (5, 12):
                pnd = build_binomial(p, M)
                for l in range(1, M):
                    assert d_bs_closed(p, M, l) == pytest.approx(
                        d_criterion(pnd, l), rel=1e-10, abs=1e-12
                    )


class TestGeneralizedBinomialClosed:
    def test_flat_hand_value(self):
        assert d_gbs_closed(2, 0.0, 0.0, 1) == pytest.approx(-1.0 / 3.0, abs=1e-12)

    def test_uniform_distribution_value(self):
        # independent route: uniform on 0..N has <N(N-1)> = N(N-1)/3, mean N/2
        N = 12
        expected = N * (N - 1) / 3.0 - (N / 2.0) ** 2
        assert d_gbs_closed(N, 0.0, 0.0, 1) == pytest.approx(expected, rel=1e-12)
        assert d_gbs_closed(N, 0.0, 0.0, 1) == pytest.approx(
            d_criterion(build_gbs(N, 0.0, 0.0), 1), rel=1e-10
        )

    def test_high_order_antibunching_window(self):
        # with alpha=2, beta=1 the order 8 and 9 witnesses go negative for moderate N
        assert d_gbs_closed(10, 2.0, 1.0, 8) < 0.0
        assert d_gbs_closed(12, 2.0, 1.0, 9) < 0.0

    def test_order_cap(self):
        with pytest.raises(ConstraintError):
            d_gbs_closed(5, 1.0, 1.0, 5)

    def test_real_parameters_supported(self):
        got = d_gbs_closed(8, -0.5, 2.25, 2)
        assert got == pytest.approx(d_criterion(build_gbs(8, -0.5, 2.25), 2), rel=1e-9)


class TestReciprocalBinomialClosed:
    def test_hand_values(self):
        # i-sum 12 - 12 + 2 = 2, minus N^2 = 4
        assert d_rbs_closed(2, 1) == -2.0
        # i-sum 2 - 4 + 2 = 0, minus 0
        assert d_rbs_closed(0, 1) == 0.0

    def test_finite_on_integer_grid(self):
        for N in range(0, 31):
            for l in range(1, 11):
                assert math.isfinite(d_rbs_closed(N, l))

    def test_antinormal_ordering_differs_from_oracle(self):
        # the distribution-side value at N=2, l=1 is -0.2, not -2
        assert d_rbs_closed(2, 1) != pytest.approx(-0.2, abs=0.5)


class TestNegativeBinomialClosed:
    def test_hand_value_geometric_floor(self):
        # (1/eta)(2(1-eta)^2 - 1/eta) at eta = 0.5
        assert d_nbs_closed(0.5, 0, 1) == pytest.approx(-3.0, abs=1e-12)

    def test_eta_one(self):
        assert d_nbs_closed(1.0, 0, 1) == pytest.approx(-1.0, abs=1e-12)

    def test_matches_geometric_reduction(self):
        # at M = 0 the expression collapses to the geometric-state formula;
        # the alternating 2F1 sum computes (1-eta)^(l+1) with cancellation,
        # which costs a few digits at high eta and order
        for eta in (0.2, 0.5, 0.9):
            for l in (1, 3, 8):
                assert d_nbs_closed(eta, 0, l) == pytest.approx(
                    d_gs_closed(eta, l), rel=1e-8
                )

    def test_domain(self):
        with pytest.raises(ConstraintError):
            d_nbs_closed(0.0, 3, 1)


class TestGeometricClosed:
    def test_hand_value(self):
        # 8 * (0.125 * 0.5 * 6 - 1)
        assert d_gs_closed(0.5, 2) == pytest.approx(-5.0, abs=1e-12)

    def test_limit_eta_one(self):
        for l in (1, 4, 9):
            assert d_gs_closed(1.0, l) == pytest.approx(-1.0, abs=1e-12)

    def test_singularity_at_zero(self):
        with pytest.raises(ConstraintError):
            d_gs_closed(0.0, 2)

    @pytest.mark.parametrize("l", range(4, 11))
    def test_single_descending_root_above_left_margin(self, l):
        # one super-Poissonian to antibunched transition on (0.05, 1)
        etas = np.linspace(0.055, 0.995, 189)
        signs = np.sign([d_gs_closed(float(e), l) for e in etas])
        flips = int(np.sum(signs[:-1] * signs[1:] < 0))
        assert flips == 1

    def test_roots_shift_right_with_order(self):
        def root(l):
            lo, hi = 0.3, 0.999
            for _ in range(80):
                mid = 0.5 * (lo + hi)
                if d_gs_closed(mid, l) > 0:
                    lo = mid
                else:
                    hi = mid
            return 0.5 * (lo + hi)

        roots = [root(l) for l in range(3, 11)]
        assert all(b > a for a, b in zip(roots, roots[1:]))


class TestPhotonAddedClosed:
    def test_coherent_reduction_is_zero(self):
        assert abs(d_pacs_closed(1.7, 0, 3)) <= 1e-9 * 1.7**8

    def test_vacuum_limit_is_zero(self):
        # both terms vanish at alpha = 0 as the expression is written
        assert d_pacs_closed(0.0, 5, 2) == 0.0

    def test_depth_grows_with_order_at_high_floor(self):
        for alpha in (0.5, 1.0, 2.0, 3.0):
            d3 = d_pacs_closed(alpha, 15, 3)
            d4 = d_pacs_closed(alpha, 15, 4)
            assert d3 < 0.0 and d4 < 0.0
            assert abs(d4) > abs(d3)

    def test_alpha_range_guard(self):
        with pytest.raises(ConvergenceError):
            d_pacs_closed(30.0, 2, 1)


class TestHypergeometricClosed:
    def test_hand_value(self):
        # -1 + 2! 2! 2!/4!
        assert d_hs_closed(4.0, 2, 0.5, 1) == pytest.approx(-2.0 / 3.0, abs=1e-12)

    def test_binomial_limit(self):
        got = d_hs_closed(1e8, 10, 0.5, 1)
        assert got == pytest.approx(d_bs_closed(0.5, 10, 1), abs=1e-5)

    def test_matches_oracle_at_minimal_L(self):
        for M, eta in [(4, 0.3), (8, 0.6)]:
            L = min_allowed_L(M, eta)
            pnd = build_hs(L, M, eta)
            for l in range(1, M):
                assert d_hs_closed(L, M, eta, l) == pytest.approx(
                    d_criterion(pnd, l), rel=1e-9, abs=1e-12
                )

    def test_constraints(self):
        with pytest.raises(ConstraintError):
            d_hs_closed(3.0, 2, 0.5, 1)  # L below the allowed floor
        with pytest.raises(ConstraintError):
            d_hs_closed(20.0, 2, 0.5, 2)  # order needs M >= l+1


class TestCrosscheck:
    def test_binomial_family_agrees(self):
        report = crosscheck(Binomial(0.5, 10), 5)
        assert report.n_disagree == 0
        assert report.n_agree == 5
        assert all("normal-ordered oracle" in r.note for r in report.rows)

    def test_hypergeometric_agrees(self):
        report = crosscheck(Hypergeometric(4.0, 2, 0.5), 1)
        assert report.n_disagree == 0
        row = report.rows[0]
        assert row.d_oracle == pytest.approx(-2.0 / 3.0, abs=1e-12)
        assert row.d_closed == pytest.approx(-2.0 / 3.0, abs=1e-12)

    def test_geometric_discrepancy_is_reported_not_fatal(self):
        report = crosscheck(Geometric(0.5), 2)
        assert report.n_disagree >= 1
        row = next(r for r in report.rows if r.l == 2)
        assert row.d_oracle >= 0.0  # super-Poissonian on the distribution side
        assert row.d_closed == pytest.approx(-5.0, abs=1e-12)
        assert row.agreement is False
        assert "rel_dev" in row.note

    def test_order_above_support_yields_informational_row(self):
        report = crosscheck(Binomial(0.5, 3), 5)
        skipped = [r for r in report.rows if r.agreement is None]
        assert {r.l for r in skipped} == {3, 4, 5}
        assert all("closed form undefined" in r.note for r in skipped)

    def test_family_defaults_and_merge(self):
        bs = crosscheck_family("binomial")
        hs = crosscheck_family("hs")
        assert bs.n_disagree == 0
        assert hs.n_disagree == 0
        merged = merge_reports([bs, hs])
        assert len(merged.rows) == len(bs.rows) + len(hs.rows)

    def test_csv_and_json_shapes(self):
        report = crosscheck(Binomial(0.25, 6), 2)
        lines = report.to_csv().strip().splitlines()
        assert lines[0] == "state,params,l,d_oracle,d_closed,abs_dev,rel_dev,agree,note"
        assert len(lines) == 3
        data = json.loads(json.dumps(report.to_json_dict()))
        assert data["summary"]["agree"] == 2


class TestDispatch:
    def test_closed_form_d_routes_by_family(self):
        assert closed_form_d(Binomial(0.5, 10), 1) == pytest.approx(-2.5, abs=1e-12)
        assert closed_form_d(Geometric(0.5), 2) == pytest.approx(-5.0, abs=1e-12)
