"""Brute-force references used to check the fast paths.

Nothing here depends on the tape's gradients: finite differences use plain
function values, grid posteriors use quadrature, and enumeration evaluates
every nuisance assignment of a finite model.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NumericalError
from .model import evaluate_given

MAX_OUTCOMES = 10 ** 6


def finite_diff_grad(f, x, h=1e-5):
    """Central-difference gradient of the scalar function ``f`` at ``x``."""
    if not h > 0:
        raise DomainError(f"step {h!r} must be positive")
    x = np.asarray(x, dtype=float)
    grad = np.empty_like(x)
    for i in range(x.shape[0]):
        e = np.zeros_like(x)
        e[i] = h
        fp, fm = f(x + e), f(x - e)
        if not (math.isfinite(fp) and math.isfinite(fm)):
            raise NumericalError(f"function not finite near x[{i}] = {x[i]!r}")
        grad[i] = (fp - fm) / (2 * h)
    return grad


@dataclass(frozen=True)
class Grid1D:
    lo: float
    hi: float
    n_points: int

    def __post_init__(self):
        if not self.lo < self.hi:
            raise DomainError(f"grid bounds {self.lo!r} >= {self.hi!r}")
        if self.n_points < 3:
            raise DomainError(f"grid needs at least 3 points, got {self.n_points}")

    def points(self):
        return np.linspace(self.lo, self.hi, self.n_points)


def grid_posterior_mean(logpost, grid, fn=None):
    """Posterior mean of ``fn(x)`` (default ``x``) by trapezoid quadrature.

    Returns ``(mean, normalizer)`` where the normalizer is the integral of
    ``exp(logpost)`` over the grid.
    """
    xs = grid.points()
    lp = np.array([logpost(v) for v in xs], dtype=float)
    if not np.all(np.isfinite(lp)):
        raise NumericalError("log posterior is not finite on the grid")
    top = lp.max()
    w = np.exp(lp - top)
    z = np.trapezoid(w, xs)
    if not z > 0:
        raise NumericalError("zero normalizer")
    vals = xs if fn is None else np.array([fn(v) for v in xs], dtype=float)
    mean = np.trapezoid(w * vals, xs) / z
    return float(mean), float(z * math.exp(top))


def enumerate_outcomes(model, x, budget=MAX_OUTCOMES):
    """``(weight, logp, grad)`` for every nuisance assignment of ``model``."""
    n = model.n_outcomes()
    if n > budget:
        raise DomainError(f"{n} outcomes exceed the enumeration budget {budget}")
    out = []
    for w, z in model.outcomes():
        logp, grad = evaluate_given(model, x, z)
        out.append((w, logp, grad))
    return out


def bootstrap_se(stat, logps, grads, n_boot, rng):
    """Bootstrap standard error of ``stat(logps, grads)`` over resampled draws."""
    n = logps.shape[0]
    reps = []
    for _ in range(n_boot):
        idx = rng.choice_index(n, n)
        reps.append(stat(logps[idx], grads[idx]))
    return np.std(np.array(reps), axis=0, ddof=1)
