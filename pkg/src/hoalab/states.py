"""Photon-number distributions of the intermediate quantum-optical states.

Seven states are supported: binomial, Roy-Roy generalized binomial,
reciprocal binomial, negative binomial, geometric, photon-added coherent
and hypergeometric. Finite-support states are built exactly; the states
with infinite support (negative binomial, geometric, photon-added
coherent) are truncated adaptively with a proven geometric-ratio tail
bound recorded on the result.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from typing import Union

import numpy as np

from .errors import ConstraintError, NumericalError
from .numerics import gen_binomial, laguerre, log_gamma, pochhammer

# Truncation tolerance used when callers do not request one. Small enough
# that truncated tails do not perturb moments up to order ~6 for the
# coherent-limit states at the tolerances asserted elsewhere.
DEFAULT_TAIL_TOL = 1e-15

# Supports up to this size are assembled from direct products; larger ones
# go through log space to dodge overflow in the binomial prefactors.
_DIRECT_SUPPORT_MAX = 30

_MAX_SUPPORT = 5_000_000


@dataclass(frozen=True)
class Binomial:
    p: float
    M: int


@dataclass(frozen=True)
class GeneralizedBinomial:
    N: int
    alpha: float
    beta: float


@dataclass(frozen=True)
class ReciprocalBinomial:
    N: int
    theta: float = 0.0


@dataclass(frozen=True)
class NegativeBinomial:
    eta: float
    M: int


@dataclass(frozen=True)
class Geometric:
    eta: float


@dataclass(frozen=True)
class PhotonAddedCoherent:
    alpha: float
    m: int


@dataclass(frozen=True)
class Hypergeometric:
    L: float
    M: int
    eta: float


StateSpec = Union[
    Binomial,
    GeneralizedBinomial,
    ReciprocalBinomial,
    NegativeBinomial,
    Geometric,
    PhotonAddedCoherent,
    Hypergeometric,
]

STATE_NAMES = {
    Binomial: "binomial",
    GeneralizedBinomial: "gbs",
    ReciprocalBinomial: "rbs",
    NegativeBinomial: "nbs",
    Geometric: "geometric",
    PhotonAddedCoherent: "pacs",
    Hypergeometric: "hs",
}

_NAME_TO_STATE = {name: cls for cls, name in STATE_NAMES.items()}


def state_name(spec: StateSpec) -> str:
    return STATE_NAMES[type(spec)]


def spec_to_dict(spec: StateSpec) -> dict:
    return {f.name: getattr(spec, f.name) for f in fields(spec)}


def spec_from_dict(name: str, params: dict) -> StateSpec:
    if name not in _NAME_TO_STATE:
        raise ConstraintError(f"unknown state family {name!r}")
    cls = _NAME_TO_STATE[name]
    want = {f.name for f in fields(cls)}
    got = set(params)
    if got != want:
        raise ConstraintError(
            f"state {name!r} takes parameters {sorted(want)}, got {sorted(got)}"
        )
    return cls(**params)


@dataclass(frozen=True)
class PhotonNumberDistribution:
    """Normalized probabilities over a contiguous photon-number support.

    probs[i] is the probability of n_min + i photons. For truncated
    distributions tail_bound is a proven upper bound on the omitted mass.
    The probability array is frozen after construction so instances can be
    shared across threads.
    """

    n_min: int
    probs: np.ndarray
    truncated: bool
    tail_bound: float
    source: StateSpec

    def __post_init__(self) -> None:
        arr = np.asarray(self.probs, dtype=float)
        arr.setflags(write=False)
        object.__setattr__(self, "probs", arr)

    @property
    def n_max(self) -> int:
        return self.n_min + len(self.probs) - 1

    @property
    def ns(self) -> np.ndarray:
        return np.arange(self.n_min, self.n_max + 1)

    def total(self) -> float:
        return math.fsum(self.probs.tolist())


PND = PhotonNumberDistribution


def _check_nonneg_int(value: int, name: str) -> None:
    if not isinstance(value, (int, np.integer)) or value < 0:
        raise ConstraintError(f"{name} must be a non-negative integer, got {value!r}")


def _delta(n: int, n_min: int, length: int, spec: StateSpec) -> PND:
    probs = np.zeros(length)
    probs[n - n_min] = 1.0
    return PND(n_min, probs, False, 0.0, spec)


def build_binomial(p: float, M: int) -> PND:
    """Binomial distribution C(M,n) p^n (1-p)^(M-n) on 0..M."""
    _check_nonneg_int(M, "M")
    if not 0.0 <= p <= 1.0:
        raise ConstraintError(f"binomial p must lie in [0, 1], got {p}")
    spec = Binomial(p, M)
    if p == 0.0:
        return _delta(0, 0, M + 1, spec)
    if p == 1.0:
        return _delta(M, 0, M + 1, spec)
    if M <= _DIRECT_SUPPORT_MAX:
        probs = np.array(
            [math.comb(M, n) * p**n * (1.0 - p) ** (M - n) for n in range(M + 1)]
        )
    else:
        lg_m = log_gamma(M + 1)
        lp, lq = math.log(p), math.log1p(-p)
        probs = np.array(
            [
                math.exp(
                    lg_m - log_gamma(n + 1) - log_gamma(M - n + 1) + n * lp + (M - n) * lq
                )
                for n in range(M + 1)
            ]
        )
    return PND(0, probs, False, 0.0, spec)


def build_gbs(N: int, alpha: float, beta: float) -> PND:
    """Roy-Roy generalized binomial distribution on 0..N.

    Weights are binomial coefficients dressed with Pochhammer factors of
    alpha+1 and beta+1, normalized by the Pochhammer of alpha+beta+2.
    """
    _check_nonneg_int(N, "N")
    if alpha <= -1.0 or beta <= -1.0:
        raise ConstraintError(
            f"generalized binomial requires alpha, beta > -1, got alpha={alpha}, beta={beta}"
        )
    spec = GeneralizedBinomial(N, alpha, beta)
    if N <= _DIRECT_SUPPORT_MAX:
        norm = pochhammer(alpha + beta + 2.0, N)
        probs = np.array(
            [
                math.comb(N, n)
                * pochhammer(alpha + 1.0, n)
                * pochhammer(beta + 1.0, N - n)
                / norm
                for n in range(N + 1)
            ]
        )
    else:
        def log_poch(a: float, n: int) -> float:
            return log_gamma(a + n) - log_gamma(a)

        lg_n = log_gamma(N + 1)
        log_norm = log_poch(alpha + beta + 2.0, N)
        probs = np.array(
            [
                math.exp(
                    lg_n
                    - log_gamma(n + 1)
                    - log_gamma(N - n + 1)
                    + log_poch(alpha + 1.0, n)
                    + log_poch(beta + 1.0, N - n)
                    - log_norm
                )
                for n in range(N + 1)
            ]
        )
    return PND(0, probs, False, 0.0, spec)


def build_rbs(N: int, theta: float = 0.0) -> PND:
    """Reciprocal binomial distribution: weights 1/C(N,k), normalized numerically.

    The phase angle theta multiplies each amplitude by a unit-modulus factor
    and therefore never reaches the probabilities; it is kept on the spec
    for fidelity and is a no-op for every downstream statistic.
    """
    _check_nonneg_int(N, "N")
    spec = ReciprocalBinomial(N, theta)
    weights = np.array([1.0 / math.comb(N, k) for k in range(N + 1)])
    probs = weights / math.fsum(weights.tolist())
    return PND(0, probs, False, 0.0, spec)


def _truncated_by_ratio(
    p_first: float,
    ratio_at,
    tail_tol: float,
) -> tuple[list[float], float]:
    """Accumulate probabilities until the geometric-ratio tail bound drops below tail_tol.

    ratio_at(i) must return P(i+1)/P(i) for 0-based index i within the
    support, and must be non-increasing in i. Once ratio < 1 the omitted
    tail is bounded by P(i) * r / (1 - r).
    """
    probs = [p_first]
    i = 0
    while True:
        r = ratio_at(i)
        if r < 1.0:
            bound = probs[-1] * r / (1.0 - r)
            if bound <= tail_tol:
                return probs, bound
        probs.append(probs[-1] * r)
        i += 1
        if len(probs) > _MAX_SUPPORT:
            raise NumericalError(
                f"truncation did not reach tail tolerance {tail_tol} within {_MAX_SUPPORT} terms"
            )


def build_nbs(eta: float, M: int, tail_tol: float = DEFAULT_TAIL_TOL) -> PND:
    """Negative binomial distribution C(n,M) eta^(M+1) (1-eta)^(n-M) on n >= M."""
    _check_nonneg_int(M, "M")
    if not 0.0 < eta <= 1.0:
        raise ConstraintError(
            f"negative binomial requires 0 < eta <= 1 (normalization diverges at 0), got {eta}"
        )
    if tail_tol <= 0.0:
        raise ConstraintError(f"tail_tol must be positive, got {tail_tol}")
    spec = NegativeBinomial(eta, M)
    if eta == 1.0:
        return _delta(M, M, 1, spec)

    oneminus = 1.0 - eta

    def ratio_at(i: int) -> float:
        n = M + i
        return oneminus * (n + 1) / (n + 1 - M)

    probs, bound = _truncated_by_ratio(eta ** (M + 1), ratio_at, tail_tol)
    return PND(M, np.array(probs), True, bound, spec)


def build_geometric(eta: float, tail_tol: float = DEFAULT_TAIL_TOL) -> PND:
    """Geometric distribution eta (1-eta)^n; the M = 0 negative binomial."""
    base = build_nbs(eta, 0, tail_tol)
    return PND(base.n_min, base.probs, base.truncated, base.tail_bound, Geometric(eta))


def build_pacs(alpha: float, m: int, tail_tol: float = DEFAULT_TAIL_TOL) -> PND:
    """Photon-added coherent state distribution on n >= m.

    P(m+k) = exp(-alpha^2) alpha^(2k) (m+k)! / (k!^2 m! L_m(-alpha^2)).
    The term ratio alpha^2 (m+k+1)/(k+1)^2 decreases in k, so the same
    geometric tail bound applies and eventually decays super-exponentially.
    """
    _check_nonneg_int(m, "m")
    if alpha < 0.0:
        raise ConstraintError(f"photon-added coherent requires alpha >= 0, got {alpha}")
    if tail_tol <= 0.0:
        raise ConstraintError(f"tail_tol must be positive, got {tail_tol}")
    spec = PhotonAddedCoherent(alpha, m)
    if alpha == 0.0:
        return _delta(m, m, 1, spec)

    z = alpha * alpha

    def ratio_at(i: int) -> float:
        return z * (m + i + 1) / ((i + 1) * (i + 1))

    p_first = math.exp(-z) / laguerre(m, -z)
    probs, bound = _truncated_by_ratio(p_first, ratio_at, tail_tol)
    return PND(m, np.array(probs), True, bound, spec)


def min_allowed_L(M: int, eta: float) -> float:
    """Smallest L for which the hypergeometric distribution is well defined."""
    return max(M / eta, M / (1.0 - eta))


def build_hs(L: float, M: int, eta: float) -> PND:
    """Hypergeometric distribution with real population parameter L on 0..M.

    P(n) = C(L eta, n) C(L(1-eta), M-n) / C(L, M) with real-argument
    binomial coefficients. Requires L >= max(M/eta, M/(1-eta)) so that
    every coefficient factor stays non-negative.
    """
    _check_nonneg_int(M, "M")
    if not 0.0 < eta < 1.0:
        raise ConstraintError(f"hypergeometric requires 0 < eta < 1, got {eta}")
    # Tiny slack so L computed as exactly the minimum passes in floats.
    if L < min_allowed_L(M, eta) * (1.0 - 1e-12):
        raise ConstraintError(
            f"hypergeometric requires L >= max(M/eta, M/(1-eta)) = {min_allowed_L(M, eta)}, got {L}"
        )
    spec = Hypergeometric(L, M, eta)
    a, b = L * eta, L * (1.0 - eta)
    if M <= _DIRECT_SUPPORT_MAX:
        denom = gen_binomial(L, M)
        probs = np.array(
            [gen_binomial(a, n) * gen_binomial(b, M - n) / denom for n in range(M + 1)]
        )
    else:
        def log_gb(x: float, n: int) -> float:
            # all factors are >= 0 on the allowed domain
            return math.fsum(math.log(x - j) for j in range(n)) - log_gamma(n + 1)

        log_denom = log_gb(L, M)
        probs = np.array(
            [
                math.exp(log_gb(a, n) + log_gb(b, M - n) - log_denom)
                for n in range(M + 1)
            ]
        )
    return PND(0, probs, False, 0.0, spec)


def build_pnd(spec: StateSpec, tail_tol: float = DEFAULT_TAIL_TOL) -> PND:
    """Build the distribution for any state spec."""
    if isinstance(spec, Binomial):
        return build_binomial(spec.p, spec.M)
    if isinstance(spec, GeneralizedBinomial):
        return build_gbs(spec.N, spec.alpha, spec.beta)
    if isinstance(spec, ReciprocalBinomial):
        return build_rbs(spec.N, spec.theta)
    if isinstance(spec, NegativeBinomial):
        return build_nbs(spec.eta, spec.M, tail_tol)
    if isinstance(spec, Geometric):
        return build_geometric(spec.eta, tail_tol)
    if isinstance(spec, PhotonAddedCoherent):
        return build_pacs(spec.alpha, spec.m, tail_tol)
    if isinstance(spec, Hypergeometric):
        return build_hs(spec.L, spec.M, spec.eta)
    raise ConstraintError(f"unknown state spec {spec!r}")


def pnd_to_csv(pnd: PND) -> str:
    """CSV rendering with header ``n,probability`` at full double precision."""
    lines = ["n,probability"]
    for n, p in zip(pnd.ns, pnd.probs):
        lines.append(f"{n},{p:.17g}")
    return "\n".join(lines) + "\n"


def pnd_from_csv(text: str) -> tuple[int, np.ndarray]:
    """Parse the CSV rendering back into (n_min, probabilities)."""
    rows = [line for line in text.strip().splitlines()[1:] if line]
    ns = [int(line.split(",")[0]) for line in rows]
    probs = np.array([float(line.split(",")[1]) for line in rows])
    if ns != list(range(ns[0], ns[0] + len(ns))):
        raise ConstraintError("CSV photon numbers must be contiguous")
    return ns[0], probs


def pnd_to_json_dict(pnd: PND) -> dict:
    return {
        "state": state_name(pnd.source),
        "params": spec_to_dict(pnd.source),
        "n_min": int(pnd.n_min),
        "probs": [float(p) for p in pnd.probs],
        "truncated": bool(pnd.truncated),
        "tail_bound": float(pnd.tail_bound),
    }


def pnd_from_json_dict(data: dict) -> PND:
    spec = spec_from_dict(data["state"], data["params"])
    return PND(
        int(data["n_min"]),
        np.array(data["probs"], dtype=float),
        bool(data["truncated"]),
        float(data["tail_bound"]),
        spec,
    )
