"""Stable scalar kernels used by every other module.

Log-gamma, real-argument binomial coefficients, Pochhammer symbols,
generalized hypergeometric series and Laguerre polynomials. All functions
are pure; none hold state. Large factorial ratios travel through
:class:`LogReal` so intermediate products never overflow a double.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import ConstraintError, DegenerateParameterError

SERIES_REL_TOL = 1e-16
SERIES_QUIET_RUN = 3
SERIES_MAX_TERMS = 1_000_000


def log_gamma(x: float) -> float:
    """ln Gamma(x) for strictly positive x."""
    if x <= 0.0:
        raise ConstraintError(f"log_gamma requires x > 0, got {x}")
    return math.lgamma(x)


def gen_binomial(a: float, n: int) -> float:
    """Binomial coefficient with a real upper argument.

    a(a-1)...(a-n+1)/n!, evaluated as interleaved ratios so the running
    product stays close to the final magnitude. Returns 1.0 for n = 0.
    """
    if n < 0:
        raise ConstraintError(f"gen_binomial requires n >= 0, got {n}")
    out = 1.0
    for j in range(n):
        out *= (a - j) / (j + 1)
    return out


def pochhammer(a: float, n: int) -> float:
    """Rising factorial a(a+1)...(a+n-1); 1.0 for n = 0."""
    if n < 0:
        raise ConstraintError(f"pochhammer requires n >= 0, got {n}")
    out = 1.0
    for j in range(n):
        out *= a + j
    return out


def falling_factorial(a: float, n: int) -> float:
    """a(a-1)...(a-n+1); 1.0 for n = 0."""
    if n < 0:
        raise ConstraintError(f"falling_factorial requires n >= 0, got {n}")
    out = 1.0
    for j in range(n):
        out *= a - j
    return out


@dataclass(frozen=True)
class LogReal:
    """A real number stored as a sign and the natural log of its magnitude.

    sign 0 encodes exact zero; the stored log magnitude is then ignored.
    Multiplication and division are exact in log space. Addition is not
    provided: callers that need sums shift exponents and accumulate in
    ordinary floats.
    """

    sign: int
    log_magnitude: float

    @staticmethod
    def from_float(x: float) -> "LogReal":
        if x == 0.0:
            return LogReal(0, 0.0)
        return LogReal(1 if x > 0.0 else -1, math.log(abs(x)))

    def to_float(self) -> float:
        if self.sign == 0:
            return 0.0
        try:
            return self.sign * math.exp(self.log_magnitude)
        except OverflowError:
            return self.sign * math.inf

    def __mul__(self, other: "LogReal") -> "LogReal":
        if self.sign == 0 or other.sign == 0:
            return LogReal(0, 0.0)
        return LogReal(self.sign * other.sign, self.log_magnitude + other.log_magnitude)

    def __truediv__(self, other: "LogReal") -> "LogReal":
        if other.sign == 0:
            raise ZeroDivisionError("LogReal division by exact zero")
        if self.sign == 0:
            return LogReal(0, 0.0)
        return LogReal(self.sign * other.sign, self.log_magnitude - other.log_magnitude)


def logreal_product(factors: Iterable[float]) -> LogReal:
    """Product of ordinary floats carried out in log space.

    A single zero factor short-circuits to exact zero. The individual logs
    are combined with exact summation so long products stay accurate.
    """
    sign = 1
    logs = []
    for f in factors:
        if f == 0.0:
            return LogReal(0, 0.0)
        if f < 0.0:
            sign = -sign
        logs.append(math.log(abs(f)))
    return LogReal(sign, math.fsum(logs))


@dataclass(frozen=True)
class HypSeriesResult:
    """Outcome of a hypergeometric series evaluation.

    terminated means a non-positive-integer numerator parameter cut the
    series exactly (residual_estimate is then 0). converged is False only
    when the term cap was hit; the value is then unreliable.
    """

    value: float
    terms_used: int
    terminated: bool
    converged: bool
    residual_estimate: float


def hyp_series(
    numerators: Sequence[float],
    denominators: Sequence[float],
    z: float,
    max_terms: int = SERIES_MAX_TERMS,
) -> HypSeriesResult:
    """Generalized hypergeometric series sum_k [prod (a)_k / prod (b)_k] z^k / k!.

    Terms follow the recursion term_{k+1} = term_k * prod(a+k) * z / (prod(b+k) * (k+1))
    with Kahan-compensated accumulation. A numerator parameter equal to a
    non-positive integer terminates the series exactly; that check runs
    before the denominators are touched, so a denominator parameter that
    would vanish at or after the terminating index is never divided by.
    Otherwise the sum stops once |term| < 1e-16 * |partial sum| holds for
    three consecutive terms.
    """
    nums = [float(a) for a in numerators]
    dens = [float(b) for b in denominators]
    z = float(z)

    total = 1.0  # k = 0 term
    comp = 0.0
    term = 1.0
    terms_used = 1
    quiet = 0
    k = 0
    ratio = 0.0
    while True:
        if any(a + k == 0.0 for a in nums):
            return HypSeriesResult(total, terms_used, True, True, 0.0)
        den_shift = [b + k for b in dens]
        if any(d == 0.0 for d in den_shift):
            bad = dens[den_shift.index(0.0)]
            raise DegenerateParameterError(
                f"denominator parameter {bad} vanishes at k={k} before the series terminates"
            )
        num_factor = math.prod(a + k for a in nums)
        den_factor = math.prod(den_shift) * (k + 1)
        ratio = num_factor * z / den_factor
        term = term * ratio
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        k += 1
        terms_used += 1
        if abs(term) < SERIES_REL_TOL * abs(total):
            quiet += 1
            if quiet >= SERIES_QUIET_RUN:
                r = abs(ratio)
                residual = abs(term) * (r / (1.0 - r)) if r < 1.0 else abs(term)
                return HypSeriesResult(total, terms_used, False, True, residual)
        else:
            quiet = 0
        if terms_used >= max_terms:
            return HypSeriesResult(total, terms_used, False, False, abs(term))


def laguerre(m: int, x: float) -> float:
    """Laguerre polynomial L_m(x), evaluated as the terminating series 1F1(-m; 1; x)."""
    if m < 0:
        raise ConstraintError(f"laguerre requires m >= 0, got {m}")
    return hyp_series([-float(m)], [1.0], x).value
