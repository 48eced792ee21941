"""Posterior summaries and the stochastic-vs-deterministic consistency check."""

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

MIN_SAMPLES = 10


def batch_means_ess(x):
    """Effective sample size of a 1-D chain by non-overlapping batch means.

    Uses ``floor(sqrt(n))`` batches.  A constant chain has ESS ``n``; the
    result is capped at ``n``.
    """
    x = np.asarray(x, dtype=float)
    n = x.shape[0]
    var = x.var(ddof=1)
    if var == 0.0:
        return float(n)
    n_batches = int(math.isqrt(n))
    size = n // n_batches
    means = x[: n_batches * size].reshape(n_batches, size).mean(axis=1)
    var_bm = size * means.var(ddof=1)
    if var_bm <= 0.0:
        return float(n)
    return float(min(n, n * var / var_bm))


@dataclass
class PosteriorSummary:
    mean: np.ndarray
    sd: np.ndarray
    ess: np.ndarray
    mcse: np.ndarray
    n: int
    divergences: int = 0
    accept_rate: Optional[float] = None
    seconds: Optional[float] = None
    extra: dict = field(default_factory=dict)


def summarize(batches, transform=None):
    """Summarize one or more :class:`SampleBatch` objects.

    Means and standard deviations are pooled over chains; ESS is the sum of
    per-chain ESS.  ``transform`` maps a samples matrix to the quantities to
    summarize (e.g. label sorting for mixtures).
    """
    if not isinstance(batches, (list, tuple)):
        batches = [batches]
    chains = [b.samples if transform is None else transform(b.samples) for b in batches]
    n = sum(c.shape[0] for c in chains)
    if any(c.shape[0] < MIN_SAMPLES for c in chains):
        raise ValueError(f"summaries need at least {MIN_SAMPLES} samples per chain")
    pooled = np.vstack(chains)
    mean = pooled.mean(axis=0)
    sd = pooled.std(axis=0, ddof=1)
    ess = np.array([sum(batch_means_ess(c[:, j]) for c in chains)
                    for j in range(pooled.shape[1])])
    mcse = sd / np.sqrt(ess)
    rates = [b.accept_rate for b in batches if b.accept_rate is not None]
    return PosteriorSummary(
        mean=mean,
        sd=sd,
        ess=ess,
        mcse=mcse,
        n=n,
        divergences=sum(b.divergences for b in batches),
        accept_rate=float(np.mean(rates)) if rates else None,
    )


@dataclass
class Comparison:
    delta: np.ndarray
    threshold: np.ndarray
    passed: np.ndarray

    @property
    def ok(self):
        return bool(np.all(self.passed))

    def as_dict(self):
        return {
            "delta": [float(v) for v in self.delta],
            "threshold": [float(v) for v in self.threshold],
            "pass": [bool(v) for v in self.passed],
            "ok": self.ok,
        }


def compare_runs(a, b, transform=None):
    """Per-dimension test ``|mean_a - mean_b| <= 3 sqrt(mcse_a^2 + mcse_b^2)``."""
    sa = a if isinstance(a, PosteriorSummary) else summarize(a, transform)
    sb = b if isinstance(b, PosteriorSummary) else summarize(b, transform)
    if sa.mean.shape != sb.mean.shape:
        raise ValueError(f"dimension mismatch: {sa.mean.shape[0]} vs {sb.mean.shape[0]}")
    delta = np.abs(sa.mean - sb.mean)
    threshold = 3.0 * np.sqrt(sa.mcse ** 2 + sb.mcse ** 2)
    return Comparison(delta, threshold, delta <= threshold)
