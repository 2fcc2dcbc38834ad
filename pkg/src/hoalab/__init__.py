"""hoalab: photon-number statistics of intermediate quantum-optical states
and their higher-order antibunching criteria.

The library builds exact or tail-bounded photon-number distributions for
seven state families, computes normal- and antinormal-ordered factorial
moments, evaluates the d(l), A_l and R(l, m) antibunching witnesses,
cross-validates the analytic d(l) expressions against a brute-force
summation oracle, and simulates idealized photon-counting experiments.
"""

from .criteria import (
    ANTIBUNCHED,
    BUNCHED,
    COHERENT,
    CriterionResult,
    HierarchyResult,
    ba_an_A,
    classify,
    d_criterion,
    default_zero_tol,
    evaluate_criterion,
    hierarchy_check,
    lee_R,
)
from .closedform import (
    DiscrepancyReport,
    DiscrepancyRow,
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
from .errors import (
    ConstraintError,
    ConvergenceError,
    DegenerateParameterError,
    HoalabError,
    NumericalError,
    TruncationWarning,
    UndefinedCriterionError,
)
from .moments import MomentVector, antinormal_moment, factorial_moment, moment_vector
from .montecarlo import MCEstimate, SampleHistogram, estimate_d, sample_pnd, spawn_seeds
from .numerics import (
    HypSeriesResult,
    LogReal,
    gen_binomial,
    hyp_series,
    laguerre,
    log_gamma,
    pochhammer,
)
from .states import (
    DEFAULT_TAIL_TOL,
    Binomial,
    GeneralizedBinomial,
    Geometric,
    Hypergeometric,
    NegativeBinomial,
    PhotonAddedCoherent,
    PhotonNumberDistribution,
    ReciprocalBinomial,
    StateSpec,
    build_binomial,
    build_gbs,
    build_geometric,
    build_hs,
    build_nbs,
    build_pacs,
    build_pnd,
    build_rbs,
    min_allowed_L,
    pnd_from_csv,
    pnd_from_json_dict,
    pnd_to_csv,
    pnd_to_json_dict,
)

__version__ = "0.1.0"

__all__ = [
    "ANTIBUNCHED",
    "BUNCHED",
    "COHERENT",
    "Binomial",
    "ConstraintError",
    "ConvergenceError",
    "CriterionResult",
    "DEFAULT_TAIL_TOL",
    "DegenerateParameterError",
    "DiscrepancyReport",
    "DiscrepancyRow",
    "GeneralizedBinomial",
    "Geometric",
    "HierarchyResult",
    "HoalabError",
    "HypSeriesResult",
    "Hypergeometric",
    "LogReal",
    "MCEstimate",
    "MomentVector",
    "NegativeBinomial",
    "NumericalError",
    "PhotonAddedCoherent",
    "PhotonNumberDistribution",
    "ReciprocalBinomial",
    "SampleHistogram",
    "StateSpec",
    "TruncationWarning",
    "UndefinedCriterionError",
    "antinormal_moment",
    "ba_an_A",
    "build_binomial",
    "build_gbs",
    "build_geometric",
    "build_hs",
    "build_nbs",
    "build_pacs",
    "build_pnd",
    "build_rbs",
    "classify",
    "closed_form_d",
    "crosscheck",
    "crosscheck_family",
    "d_bs_closed",
    "d_criterion",
    "d_gbs_closed",
    "d_gs_closed",
    "d_hs_closed",
    "d_nbs_closed",
    "d_pacs_closed",
    "d_rbs_closed",
    "default_zero_tol",
    "estimate_d",
    "evaluate_criterion",
    "factorial_moment",
    "gen_binomial",
    "hierarchy_check",
    "hyp_series",
    "laguerre",
    "lee_R",
    "log_gamma",
    "merge_reports",
    "min_allowed_L",
    "moment_vector",
    "pnd_from_csv",
    "pnd_from_json_dict",
    "pnd_to_csv",
    "pnd_to_json_dict",
    "pochhammer",
    "sample_pnd",
    "spawn_seeds",
]
