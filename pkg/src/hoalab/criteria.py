"""Higher-order antibunching criteria and their classification.

Three equivalent-in-spirit witnesses are computed from factorial moments:

* d(l)   = <N^(l+1)> - <N>^(l+1)                (difference form)
* A_l    = <N^(l+1)> / (<N^(l)> <N>) - 1         (ratio form)
* R(l,m) = <N^(l+1)> <N^(m-1)> / (<N^(l)> <N^(m)>) - 1   (two-index form)

where <N^(k)> is the k-th factorial moment. Negative values witness
antibunching of order l. The inequality chain linking <N^(l+1)> down to
<N>^(l+1) is checked link by link as a diagnostic rather than assumed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import ConstraintError, UndefinedCriterionError
from .moments import factorial_moment, moment_vector
from .states import PhotonNumberDistribution

ANTIBUNCHED = "antibunched"
COHERENT = "coherent"
BUNCHED = "bunched"

# Relative scale for calling a computed d "zero": d grows like <N>^(l+1).
ZERO_TOL_SCALE = 1e-10


def d_criterion(pnd: PhotonNumberDistribution, l: int) -> float:
    """d(l) = <N^(l+1)> - <N>^(l+1); negative values witness order-l antibunching."""
    if l < 1:
        raise ConstraintError(f"criterion order must be >= 1, got {l}")
    return factorial_moment(pnd, l + 1) - factorial_moment(pnd, 1) ** (l + 1)


def lee_R(pnd: PhotonNumberDistribution, l: int, m: int) -> float:
    """Two-index criterion <N^(l+1)><N^(m-1)> / (<N^(l)><N^(m)>) - 1 for 1 <= m <= l."""
    if l < 1:
        raise ConstraintError(f"criterion order must be >= 1, got {l}")
    if not 1 <= m <= l:
        raise ConstraintError(f"lee_R requires 1 <= m <= l, got m={m}, l={l}")
    den = factorial_moment(pnd, l) * factorial_moment(pnd, m)
    if den == 0.0:
        raise UndefinedCriterionError(
            f"criterion undefined: <N^({l})><N^({m})> vanishes for this state"
        )
    num = factorial_moment(pnd, l + 1) * factorial_moment(pnd, m - 1)
    return num / den - 1.0


def ba_an_A(pnd: PhotonNumberDistribution, l: int) -> float:
    """Ratio criterion <N^(l+1)> / (<N^(l)> <N>) - 1, i.e. the m = 1 two-index case."""
    return lee_R(pnd, l, 1)


@dataclass(frozen=True)
class HierarchyResult:
    """Link-by-link evaluation of the moment inequality chain.

    links[i] is True when the strict inequality holds for k = l - i, going
    from k = l down to k = 1. equalities[i] marks links whose two sides
    agree within tolerance (including vacuous 0 < 0 links); such links are
    not counted as strict. holds is the aggregate over strict links.
    """

    links: tuple
    equalities: tuple
    holds: bool


def hierarchy_check(
    pnd: PhotonNumberDistribution, l: int, rel_tol: float = 1e-10
) -> HierarchyResult:
    """Evaluate each link <N^(k+1)><N>^(l-k) < <N^(k)><N>^(l-k+1) for k = l..1."""
    if l < 1:
        raise ConstraintError(f"criterion order must be >= 1, got {l}")
    mv = moment_vector(pnd, l + 1)
    mean = mv.normal[1]
    links = []
    equalities = []
    for k in range(l, 0, -1):
        lhs = mv.normal[k + 1] * mean ** (l - k)
        rhs = mv.normal[k] * mean ** (l - k + 1)
        near = abs(lhs - rhs) <= rel_tol * max(abs(lhs), abs(rhs))
        equalities.append(near or (lhs == rhs))
        links.append(lhs < rhs and not near)
    return HierarchyResult(tuple(links), tuple(equalities), all(links))


def classify(d_value: float, zero_tol: float) -> str:
    """Three-way call: antibunched below -zero_tol, bunched above, coherent between."""
    if zero_tol < 0.0:
        raise ConstraintError(f"zero_tol must be >= 0, got {zero_tol}")
    if d_value < -zero_tol:
        return ANTIBUNCHED
    if d_value > zero_tol:
        return BUNCHED
    return COHERENT


def default_zero_tol(pnd: PhotonNumberDistribution, l: int) -> float:
    """Relative coherence tolerance: 1e-10 scaled by max(1, <N>^(l+1))."""
    mean = factorial_moment(pnd, 1)
    return ZERO_TOL_SCALE * max(1.0, mean ** (l + 1))


@dataclass(frozen=True)
class CriterionResult:
    """All witnesses for one order l, plus the classification of d."""

    l: int
    d: float
    A: Optional[float]
    R: Optional[float]
    lm: Optional[tuple]
    classification: str
    zero_tol: float

    def to_json_dict(self) -> dict:
        return {
            "l": self.l,
            "d": self.d,
            "A": self.A,
            "R": self.R,
            "lm": list(self.lm) if self.lm is not None else None,
            "classification": self.classification,
            "zero_tol": self.zero_tol,
        }


def evaluate_criterion(
    pnd: PhotonNumberDistribution,
    l: int,
    lee_m: Optional[int] = None,
    zero_tol: Optional[float] = None,
) -> CriterionResult:
    """Compute d, A and optionally R(l, m) for one state and order."""
    d = d_criterion(pnd, l)
    try:
        a_val: Optional[float] = ba_an_A(pnd, l)
    except UndefinedCriterionError:
        a_val = None
    r_val = None
    lm = None
    if lee_m is not None:
        r_val = lee_R(pnd, l, lee_m)
        lm = (l, lee_m)
    tol = default_zero_tol(pnd, l) if zero_tol is None else zero_tol
    return CriterionResult(l, d, a_val, r_val, lm, classify(d, tol), tol)
