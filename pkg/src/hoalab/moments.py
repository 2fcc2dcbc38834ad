"""Normal-ordered factorial moments and antinormal-ordered moments of a PND.

The normal-ordered factorial moment of order l is sum_n P(n) n(n-1)...(n-l+1);
the antinormal-ordered moment is sum_n P(n) (n+1)(n+2)...(n+l). Both depend
only on the probabilities, never on phases. Sums are accumulated with exact
(compensated) summation in ascending n, and the falling/rising weights are
updated recursively instead of through factorials.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ConstraintError, TruncationWarning
from .states import PhotonNumberDistribution

# A truncated tail is flagged once its worst-case contribution exceeds this
# fraction of the computed moment.
TRUNCATION_IMPACT_REL = 1e-9


def _tail_impact(pnd: PhotonNumberDistribution, l: int, result: float) -> bool:
    if not pnd.truncated or l == 0:
        return False
    impact = pnd.tail_bound * float(pnd.n_max) ** l
    return impact > TRUNCATION_IMPACT_REL * abs(result)


def _warn_truncation(pnd: PhotonNumberDistribution, l: int, result: float) -> bool:
    if _tail_impact(pnd, l, result):
        warnings.warn(
            f"truncated tail (bound {pnd.tail_bound:.3g}) may bias the order-{l} moment",
            TruncationWarning,
            stacklevel=3,
        )
        return True
    return False


def factorial_moment(pnd: PhotonNumberDistribution, l: int) -> float:
    """<N(N-1)...(N-l+1)>; photon numbers below l contribute nothing."""
    if l < 0:
        raise ConstraintError(f"moment order must be >= 0, got {l}")
    probs = pnd.probs
    ns = pnd.ns.astype(float)
    w = np.ones_like(ns)
    for k in range(1, l + 1):
        w = w * (ns - (k - 1))
    result = math.fsum((probs * w).tolist())
    _warn_truncation(pnd, l, result)
    return result


def antinormal_moment(pnd: PhotonNumberDistribution, l: int) -> float:
    """<(N+1)(N+2)...(N+l)>, the antinormal-ordered counterpart."""
    if l < 0:
        raise ConstraintError(f"moment order must be >= 0, got {l}")
    probs = pnd.probs
    ns = pnd.ns.astype(float)
    w = np.ones_like(ns)
    for k in range(1, l + 1):
        w = w * (ns + k)
    result = math.fsum((probs * w).tolist())
    _warn_truncation(pnd, l, result)
    return result


@dataclass(frozen=True)
class MomentVector:
    """Both moment families for orders 0..max_order."""

    max_order: int
    normal: tuple
    antinormal: tuple
    truncation_warning: bool


def moment_vector(pnd: PhotonNumberDistribution, max_order: int) -> MomentVector:
    """Compute both moment families for l = 0..max_order in one pass."""
    if max_order < 1:
        raise ConstraintError(f"max_order must be >= 1, got {max_order}")
    probs = pnd.probs
    ns = pnd.ns.astype(float)
    total = math.fsum(probs.tolist())
    normal = [total]
    anti = [total]
    w_norm = np.ones_like(ns)
    w_anti = np.ones_like(ns)
    flagged = False
    for k in range(1, max_order + 1):
        w_norm = w_norm * (ns - (k - 1))
        w_anti = w_anti * (ns + k)
        m_norm = math.fsum((probs * w_norm).tolist())
        m_anti = math.fsum((probs * w_anti).tolist())
        normal.append(m_norm)
        anti.append(m_anti)
        if _warn_truncation(pnd, k, m_norm):
            flagged = True
    return MomentVector(max_order, tuple(normal), tuple(anti), flagged)
