"""Idealized photon-counting simulation.

Photon numbers are drawn from a distribution by inverse-CDF sampling with
numpy's PCG64 generator (unit detection efficiency, no dark counts), and
d(l) is estimated from plug-in sample factorial moments with a
nonparametric bootstrap standard error. Everything is deterministic given
the seeds; independent streams for batch runs come from numpy's
SeedSequence spawning.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConstraintError
from .states import PhotonNumberDistribution


@dataclass(frozen=True)
class SampleHistogram:
    """Per-photon-number counts from one simulated counting run."""

    n_min: int
    counts: np.ndarray
    n_samples: int
    seed: int

    def __post_init__(self) -> None:
        arr = np.asarray(self.counts, dtype=np.int64)
        arr.setflags(write=False)
        object.__setattr__(self, "counts", arr)

    @property
    def ns(self) -> np.ndarray:
        return np.arange(self.n_min, self.n_min + len(self.counts))

    def to_json_dict(self) -> dict:
        return {
            "n_min": int(self.n_min),
            "counts": [int(c) for c in self.counts],
            "n_samples": int(self.n_samples),
            "seed": int(self.seed),
        }


@dataclass(frozen=True)
class MCEstimate:
    """Monte Carlo estimate of d(l) with bootstrap standard error."""

    l: int
    d_hat: float
    stderr: float
    n_samples: int
    seed: int
    bootstrap_resamples: int
    degenerate: bool

    def to_json_dict(self) -> dict:
        return {
            "l": self.l,
            "d_hat": self.d_hat,
            "stderr": self.stderr,
            "n_samples": self.n_samples,
            "seed": self.seed,
            "bootstrap_resamples": self.bootstrap_resamples,
            "degenerate": self.degenerate,
        }


def sample_pnd(pnd: PhotonNumberDistribution, n_samples: int, seed: int) -> SampleHistogram:
    """Draw photon-number samples by inverting the cumulative distribution.

    Uniform variates come from numpy's default PCG64 generator seeded with
    ``seed``; identical inputs give identical histograms. Residual mass from
    a truncated tail (at most tail_bound) is assigned to the top of the
    support.
    """
    if n_samples < 1:
        raise ConstraintError(f"n_samples must be >= 1, got {n_samples}")
    rng = np.random.default_rng(seed)
    u = rng.random(n_samples)
    cdf = np.cumsum(pnd.probs)
    idx = np.searchsorted(cdf, u, side="right")
    np.clip(idx, 0, len(pnd.probs) - 1, out=idx)
    counts = np.bincount(idx, minlength=len(pnd.probs))
    return SampleHistogram(pnd.n_min, counts, n_samples, seed)


def _falling_weights(ns: np.ndarray, order: int) -> np.ndarray:
    w = np.ones(len(ns))
    for k in range(1, order + 1):
        w = w * (ns - (k - 1))
    return w


def estimate_d(
    histogram: SampleHistogram,
    l: int,
    bootstrap_resamples: int = 200,
    seed: int = 0,
) -> MCEstimate:
    """Plug-in estimate of d(l) from a histogram, with bootstrap stderr.

    d_hat is the sample factorial moment of order l+1 minus the sample mean
    to the power l+1. The standard error is the standard deviation of the
    same statistic over multinomial resamples of the histogram, generated
    from a PCG64 stream seeded with ``seed``. Histograms concentrated on a
    single photon number are flagged degenerate and get stderr 0.
    """
    if l < 1:
        raise ConstraintError(f"criterion order must be >= 1, got {l}")
    if bootstrap_resamples < 1:
        raise ConstraintError(
            f"bootstrap_resamples must be >= 1, got {bootstrap_resamples}"
        )
    counts = histogram.counts
    n = histogram.n_samples
    if int(counts.sum()) != n:
        raise ConstraintError("histogram counts do not sum to n_samples")
    ns = histogram.ns.astype(float)
    w_hi = _falling_weights(ns, l + 1)
    p_hat = counts / n
    d_hat = float(p_hat @ w_hi - (p_hat @ ns) ** (l + 1))

    degenerate = int(np.count_nonzero(counts)) <= 1
    if degenerate:
        stderr = 0.0
    else:
        rng = np.random.default_rng(seed)
        pvals = counts / counts.sum()
        boot = rng.multinomial(n, pvals, size=bootstrap_resamples)
        m_hi = boot @ w_hi / n
        m_1 = boot @ ns / n
        d_boot = m_hi - m_1 ** (l + 1)
        stderr = float(np.std(d_boot, ddof=1))
    return MCEstimate(l, d_hat, stderr, n, int(histogram.seed), bootstrap_resamples, degenerate)


def spawn_seeds(master_seed: int, count: int) -> list[int]:
    """Derive independent 64-bit child seeds from one master seed.

    Uses numpy's SeedSequence spawning, the documented splitting rule for
    parallel estimation batches.
    """
    children = np.random.SeedSequence(master_seed).spawn(count)
    return [int(child.generate_state(1, dtype=np.uint64)[0]) for child in children]
