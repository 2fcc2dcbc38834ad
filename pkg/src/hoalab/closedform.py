"""Analytic d(l) expressions for each state and their audit against the
summation oracle.

The binomial, generalized binomial and hypergeometric expressions are
normal-ordered and agree with d computed from the distribution. The
reciprocal binomial expression is built with antinormal ordering, and the
negative binomial / geometric / photon-added expressions carry their own
ordering conventions; those are evaluated verbatim and their deviations
from the normal-ordered oracle are reported, not asserted away.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .criteria import d_criterion
from .errors import ConstraintError, ConvergenceError
from .moments import factorial_moment
from .numerics import LogReal, hyp_series, laguerre, logreal_product
from .states import (
    DEFAULT_TAIL_TOL,
    Binomial,
    GeneralizedBinomial,
    Geometric,
    Hypergeometric,
    NegativeBinomial,
    PhotonAddedCoherent,
    ReciprocalBinomial,
    StateSpec,
    build_pnd,
    min_allowed_L,
    spec_to_dict,
    state_name,
)

# exp(-alpha^2) underflows and the entire series overflow beyond this point.
_PACS_Z_MAX = 700.0


def _check_order(l: int) -> None:
    if not isinstance(l, (int,)) or l < 1:
        raise ConstraintError(f"criterion order must be a positive integer, got {l!r}")


def d_bs_closed(p: float, M: int, l: int) -> float:
    """Binomial state: M! p^(l+1) / (M-l-1)! - (M p)^(l+1), for M > l."""
    _check_order(l)
    if not 0.0 <= p <= 1.0:
        raise ConstraintError(f"binomial p must lie in [0, 1], got {p}")
    if M <= l:
        raise ConstraintError(
            f"binomial closed form needs M >= l+1 (the state holds only M photons), got M={M}, l={l}"
        )
    if p == 0.0:
        return 0.0
    ff = logreal_product(float(M - j) for j in range(l + 1))
    first = (ff * LogReal(1, (l + 1) * math.log(p))).to_float()
    return first - (M * p) ** (l + 1)


def d_gbs_closed(N: int, alpha: float, beta: float, l: int) -> float:
    """Generalized binomial state, product form valid for real alpha, beta > -1.

    [N(N-1)...(N-l)][(alpha+1)...(alpha+l+1)] / [(alpha+beta+2)...(alpha+beta+l+2)]
    minus {N(alpha+1)/(alpha+beta+2)}^(l+1), for N >= l+1.
    """
    _check_order(l)
    if alpha <= -1.0 or beta <= -1.0:
        raise ConstraintError(
            f"generalized binomial requires alpha, beta > -1, got alpha={alpha}, beta={beta}"
        )
    if N < l + 1:
        raise ConstraintError(
            f"generalized binomial closed form needs N >= l+1, got N={N}, l={l}"
        )
    num = logreal_product(float(N - j) for j in range(l + 1)) * logreal_product(
        alpha + j for j in range(1, l + 2)
    )
    den = logreal_product(alpha + beta + j for j in range(2, l + 3))
    mean = N * (alpha + 1.0) / (alpha + beta + 2.0)
    return (num / den).to_float() - mean ** (l + 1)


def d_rbs_closed(N: int, l: int) -> float:
    """Reciprocal binomial state, antinormal-ordered alternating sum.

    sum_{i=0}^{l+1} (-1)^i (l+1)!^2 / ((l+1-i)!^2 i!) * (N+l+1-i)!/N!  -  N^(l+1).

    Every term is an integer, so the alternating sum is carried out in
    exact integer arithmetic; cancellation costs no precision and the
    result is finite for all integer N.
    """
    _check_order(l)
    if not isinstance(N, (int,)) or N < 0:
        raise ConstraintError(f"reciprocal binomial requires integer N >= 0, got {N!r}")
    total = 0
    for i in range(l + 2):
        coeff = math.comb(l + 1, i) * math.perm(l + 1, i)
        tail = math.perm(N + l + 1 - i, l + 1 - i)
        total += (-1) ** i * coeff * tail
    return float(total - N ** (l + 1))


def d_nbs_closed(eta: float, M: int, l: int) -> float:
    """Negative binomial state.

    eta^(-l) [ (l+M+1)!/M! * 2F1(-l-1, -l-1; -l-M-1; eta) - (M+1)^(l+1)/eta ].
    The 2F1 terminates at k = l+1 through its numerator parameters, at or
    before the denominator parameter could vanish, so the finite sum is
    always well defined for M >= 0.
    """
    _check_order(l)
    if not 0.0 < eta <= 1.0:
        raise ConstraintError(f"negative binomial requires 0 < eta <= 1, got {eta}")
    if not isinstance(M, (int,)) or M < 0:
        raise ConstraintError(f"negative binomial requires integer M >= 0, got {M!r}")
    f = hyp_series([-(l + 1.0), -(l + 1.0)], [-(l + M + 1.0)], eta)
    first = math.perm(l + M + 1, l + 1) * f.value
    return eta ** (-l) * (first - (M + 1) ** (l + 1) / eta)


def d_gs_closed(eta: float, l: int) -> float:
    """Geometric state: ((1-eta)^(l+1) eta (l+1)! - 1) / eta^(l+1).

    Diverges as eta -> 0; eta = 0 itself is rejected as a singularity.
    """
    _check_order(l)
    if eta == 0.0:
        raise ConstraintError("geometric-state expression has a singularity at eta = 0")
    if not 0.0 < eta <= 1.0:
        raise ConstraintError(f"geometric requires 0 < eta <= 1, got {eta}")
    return ((1.0 - eta) ** (l + 1) * eta * math.factorial(l + 1) - 1.0) / eta ** (l + 1)


def d_pacs_closed(alpha: float, m: int, l: int) -> float:
    """Photon-added coherent state, evaluated verbatim.

    First term: exp(-a^2) a^(2l+2) C(l+m+1, l+1)^2
                * 3F3({1, 2+l+m, 2+l+m}; {2+l, 2+l, m+1}; a^2) / 1F1(-m; 1; -a^2).
    Second term: the bracketed mean-like combination of confluent series,
    raised to the (l+1)-th power. At m = 0 both terms reduce to a^(2l+2)
    and the difference vanishes identically.
    """
    _check_order(l)
    if alpha < 0.0:
        raise ConstraintError(f"photon-added coherent requires alpha >= 0, got {alpha}")
    if not isinstance(m, (int,)) or m < 0:
        raise ConstraintError(f"photon-added coherent requires integer m >= 0, got {m!r}")
    z = alpha * alpha
    if z > _PACS_Z_MAX:
        raise ConvergenceError(
            f"alpha^2 = {z} exceeds the supported range ({_PACS_Z_MAX}) of the entire series"
        )
    lag = laguerre(m, -z)
    big = hyp_series([1.0, 2.0 + l + m, 2.0 + l + m], [2.0 + l, 2.0 + l, m + 1.0], z)
    if not big.converged:
        raise ConvergenceError("3F3 series hit the term cap without converging")
    pref = math.comb(l + m + 1, l + 1) ** 2
    term1 = math.exp(-z) * z ** (l + 1) * pref * big.value / lag
    f1 = hyp_series([m + 1.0], [1.0], z)
    f2 = hyp_series([m + 2.0], [2.0], z)
    if not (f1.converged and f2.converged):
        raise ConvergenceError("1F1 series hit the term cap without converging")
    bracket = math.exp(-z) * (-m + m * f1.value + (1 + m) * z * f2.value) / lag
    return term1 - bracket ** (l + 1)


def d_hs_closed(L: float, M: int, eta: float, l: int) -> float:
    """Hypergeometric state.

    -(M eta)^(l+1) + [M(M-1)...(M-l)] [L eta (L eta - 1)...(L eta - l)]
                     / [L(L-1)...(L-l)],
    the real-argument reading of the factorial ratios, valid for M >= l+1
    and L >= max(M/eta, M/(1-eta)).
    """
    _check_order(l)
    if not 0.0 < eta < 1.0:
        raise ConstraintError(f"hypergeometric requires 0 < eta < 1, got {eta}")
    if L < min_allowed_L(M, eta) * (1.0 - 1e-12):
        raise ConstraintError(
            f"hypergeometric requires L >= max(M/eta, M/(1-eta)) = {min_allowed_L(M, eta)}, got {L}"
        )
    if M <= l:
        raise ConstraintError(
            f"hypergeometric closed form needs M >= l+1, got M={M}, l={l}"
        )
    num = logreal_product(float(M - j) for j in range(l + 1)) * logreal_product(
        L * eta - j for j in range(l + 1)
    )
    den = logreal_product(L - j for j in range(l + 1))
    return (num / den).to_float() - (M * eta) ** (l + 1)


def closed_form_d(spec: StateSpec, l: int) -> float:
    """Dispatch to the analytic expression matching the state family."""
    if isinstance(spec, Binomial):
        return d_bs_closed(spec.p, spec.M, l)
    if isinstance(spec, GeneralizedBinomial):
        return d_gbs_closed(spec.N, spec.alpha, spec.beta, l)
    if isinstance(spec, ReciprocalBinomial):
        return d_rbs_closed(spec.N, l)
    if isinstance(spec, NegativeBinomial):
        return d_nbs_closed(spec.eta, spec.M, l)
    if isinstance(spec, Geometric):
        return d_gs_closed(spec.eta, l)
    if isinstance(spec, PhotonAddedCoherent):
        return d_pacs_closed(spec.alpha, spec.m, l)
    if isinstance(spec, Hypergeometric):
        return d_hs_closed(spec.L, spec.M, spec.eta, l)
    raise ConstraintError(f"unknown state spec {spec!r}")


@dataclass(frozen=True)
class DiscrepancyRow:
    """One (state, l) comparison of oracle d against the analytic value.

    agreement is None when the closed form is undefined at this order
    (constraint rows are informational, neither agree nor disagree).
    """

    state: str
    params: str
    l: int
    d_oracle: float
    d_closed: Optional[float]
    abs_dev: Optional[float]
    rel_dev: Optional[float]
    agreement: Optional[bool]
    note: str


@dataclass(frozen=True)
class DiscrepancyReport:
    rows: tuple
    tol: float

    @property
    def n_agree(self) -> int:
        return sum(1 for r in self.rows if r.agreement is True)

    @property
    def n_disagree(self) -> int:
        return sum(1 for r in self.rows if r.agreement is False)

    @property
    def n_skipped(self) -> int:
        return sum(1 for r in self.rows if r.agreement is None)

    def to_csv(self) -> str:
        lines = ["state,params,l,d_oracle,d_closed,abs_dev,rel_dev,agree,note"]
        for r in self.rows:
            closed = "" if r.d_closed is None else f"{r.d_closed:.17g}"
            absd = "" if r.abs_dev is None else f"{r.abs_dev:.17g}"
            reld = "" if r.rel_dev is None else f"{r.rel_dev:.17g}"
            agree = "" if r.agreement is None else str(r.agreement).lower()
            note = r.note.replace(",", ";")
            lines.append(
                f"{r.state},{r.params},{r.l},{r.d_oracle:.17g},{closed},{absd},{reld},{agree},{note}"
            )
        return "\n".join(lines) + "\n"

    def to_json_dict(self) -> dict:
        return {
            "tol": self.tol,
            "rows": [
                {
                    "state": r.state,
                    "params": r.params,
                    "l": r.l,
                    "d_oracle": r.d_oracle,
                    "d_closed": r.d_closed,
                    "abs_dev": r.abs_dev,
                    "rel_dev": r.rel_dev,
                    "agree": r.agreement,
                    "note": r.note,
                }
                for r in self.rows
            ],
            "summary": {
                "agree": self.n_agree,
                "disagree": self.n_disagree,
                "skipped": self.n_skipped,
            },
        }


def _params_label(spec: StateSpec) -> str:
    return ";".join(f"{k}={v}" for k, v in spec_to_dict(spec).items())


def crosscheck(
    spec: StateSpec,
    l_max: int,
    tol: float = 1e-9,
    tail_tol: float = DEFAULT_TAIL_TOL,
) -> DiscrepancyReport:
    """Compare oracle d(l) against the analytic expression for l = 1..l_max.

    Agreement means |d_oracle - d_closed| <= tol * scale, where scale is the
    larger of the two values and of <N>^(l+1); the mean-power floor keeps a
    cancellation to zero (coherent-like points) from reading as relative
    disagreement. Rows whose closed form is undefined at that order are
    recorded with a note and no verdict.
    """
    if l_max < 1:
        raise ConstraintError(f"l_max must be >= 1, got {l_max}")
    pnd = build_pnd(spec, tail_tol)
    mean = factorial_moment(pnd, 1)
    name = state_name(spec)
    params = _params_label(spec)
    rows = []
    for l in range(1, l_max + 1):
        d_oracle = d_criterion(pnd, l)
        try:
            d_closed = closed_form_d(spec, l)
        except ConstraintError as exc:
            rows.append(
                DiscrepancyRow(
                    name, params, l, d_oracle, None, None, None, None,
                    f"closed form undefined: {exc}",
                )
            )
            continue
        abs_dev = abs(d_oracle - d_closed)
        spread = max(abs(d_oracle), abs(d_closed))
        rel_dev = abs_dev / spread if spread > 0.0 else 0.0
        scale = max(spread, abs(mean) ** (l + 1))
        agree = abs_dev <= tol * scale
        note = "normal-ordered oracle"
        if rel_dev > tol:
            note += f"; rel_dev {rel_dev:.3g} exceeds tol {tol:.3g}"
        rows.append(
            DiscrepancyRow(
                name, params, l, d_oracle, d_closed, abs_dev, rel_dev, agree, note
            )
        )
    return DiscrepancyReport(tuple(rows), tol)


def merge_reports(reports) -> DiscrepancyReport:
    """Concatenate reports produced with a common tolerance."""
    reports = list(reports)
    if not reports:
        raise ConstraintError("cannot merge an empty collection of reports")
    tol = reports[0].tol
    rows = tuple(row for rep in reports for row in rep.rows)
    return DiscrepancyReport(rows, tol)


def default_crosscheck_specs(family: str) -> tuple[list[StateSpec], int]:
    """Representative parameter grid and l_max for one state family."""
    if family == "binomial":
        return [Binomial(p, M) for p in (0.25, 0.5, 0.75) for M in (5, 10, 20)], 4
    if family == "gbs":
        return (
            [
                GeneralizedBinomial(N, a, b)
                for N in (8, 15)
                for a in (-0.5, 0.0, 2.0)
                for b in (0.0, 1.0)
            ],
            4,
        )
    if family == "rbs":
        return [ReciprocalBinomial(N) for N in (2, 5, 10)], 4
    if family == "nbs":
        return [NegativeBinomial(eta, M) for eta in (0.3, 0.7) for M in (2, 10)], 4
    if family == "geometric":
        return [Geometric(eta) for eta in (0.3, 0.5, 0.8)], 4
    if family == "pacs":
        return [PhotonAddedCoherent(a, m) for a in (1.0, 2.0) for m in (0, 1, 5)], 4
    if family == "hs":
        specs = []
        for M in (4, 8):
            for eta in (0.3, 0.5):
                for factor in (1.0, 10.0):
                    specs.append(Hypergeometric(factor * min_allowed_L(M, eta), M, eta))
        return specs, 3
    raise ConstraintError(f"unknown state family {family!r}")


CROSSCHECK_FAMILIES = ("binomial", "gbs", "rbs", "nbs", "geometric", "pacs", "hs")


def crosscheck_family(
    family: str, l_max: Optional[int] = None, tol: float = 1e-9
) -> DiscrepancyReport:
    """Run the audit over the default grid of one family."""
    specs, default_lmax = default_crosscheck_specs(family)
    effective = default_lmax if l_max is None else l_max
    return merge_reports(crosscheck(spec, effective, tol) for spec in specs)
