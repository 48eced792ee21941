"""Gradient estimates of log p~(x | y) under the three semantics.

* deterministic: one exact evaluation;
* nondeterminism: the target is the geometric integral
  ``exp(E_z[log p~(x|y,z)])``, so the gradient is the plain average of
  per-draw gradients with ``z`` drawn from its prior;
* marginalization: the target is ``E_z[p~(x|y,z)]``, whose gradient is the
  posterior expectation of per-draw gradients; draws from the prior are
  self-normalized by their likelihood ``p~(x|y,z)``.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import EvaluationImpossible, ModeMismatch
from .model import SemanticsMode, evaluate, evaluate_batch
from .oracles import enumerate_outcomes

LOW_ESS_FRACTION = 0.1


@dataclass
class GradientEstimate:
    grad: np.ndarray
    logp: float
    n_draws: int = 1
    ess: Optional[float] = None

    @property
    def low_ess(self):
        return self.ess is not None and self.ess < LOW_ESS_FRACTION * self.n_draws


@dataclass(frozen=True)
class EstimatorConfig:
    n_draws: int = 1
    mode: SemanticsMode = SemanticsMode.NONDETERMINISM

    def __post_init__(self):
        if self.n_draws < 1:
            raise ValueError(f"n_draws must be at least 1, got {self.n_draws}")


def _require(model, mode):
    if model.mode is not mode:
        raise ModeMismatch(f"{type(model).__name__} has {model.mode.value} semantics, "
                           f"estimator expects {mode.value}")


def exact_gradient(model, x, tape=None):
    _require(model, SemanticsMode.DETERMINISTIC)
    logp, grad = evaluate(model, x, tape=tape)
    return GradientEstimate(grad, logp)


def average_draws(logps, grads):
    """Unweighted mean: the nondeterminism estimate."""
    return float(np.mean(logps)), grads.mean(axis=0)


def snis_draws(logps, grads):
    """Self-normalized importance-weighted combination of prior draws.

    Returns ``(logp, grad, weights)``; ``logp`` is ``log mean exp`` of the
    draws, a downward-biased estimate of the log marginal.
    """
    top = np.max(logps)
    if top == -math.inf:
        raise EvaluationImpossible("every draw")
    w = np.exp(logps - top)
    total = w.sum()
    w /= total
    logp = float(top + math.log(total) - math.log(logps.shape[0]))
    return logp, w @ grads, w


def nondeterminism_gradient(model, x, cfg, rng, tape=None):
    _require(model, SemanticsMode.NONDETERMINISM)
    if cfg.mode is not SemanticsMode.NONDETERMINISM:
        raise ModeMismatch(f"estimator configured for {cfg.mode.value}")
    logps, grads = evaluate_batch(model, x, rng, cfg.n_draws, tape)
    logp, grad = average_draws(logps, grads)
    return GradientEstimate(grad, logp, cfg.n_draws)


def marginalization_gradient(model, x, cfg, rng, tape=None):
    _require(model, SemanticsMode.MARGINALIZATION)
    if cfg.mode is not SemanticsMode.MARGINALIZATION:
        raise ModeMismatch(f"estimator configured for {cfg.mode.value}")
    logps, grads = evaluate_batch(model, x, rng, cfg.n_draws, tape, tolerate_impossible=True)
    logp, grad, w = snis_draws(logps, grads)
    return GradientEstimate(grad, logp, cfg.n_draws, float(1.0 / np.dot(w, w)))


def enumerated_gradient(model, x, mode):
    """Exact version of either estimator by summing over every nuisance outcome."""
    rows = enumerate_outcomes(model, x)
    weights = np.array([r[0] for r in rows])
    if abs(math.fsum(weights) - 1.0) > 1e-12:
        raise ValueError(f"outcome weights sum to {math.fsum(weights)!r}, not 1")
    logps = np.array([r[1] for r in rows])
    grads = np.array([r[2] for r in rows])
    if mode is SemanticsMode.MARGINALIZATION:
        a = np.log(weights) + logps
        top = a.max()
        w = np.exp(a - top)
        total = w.sum()
        return GradientEstimate((w / total) @ grads, float(top + math.log(total)), len(rows))
    if mode is SemanticsMode.NONDETERMINISM:
        return GradientEstimate(weights @ grads, float(weights @ logps), len(rows))
    raise ModeMismatch("enumeration needs marginalization or nondeterminism semantics")


def estimator_for(mode, cfg=None):
    """Return a callable ``(model, x, rng, tape) -> GradientEstimate`` for ``mode``."""
    if mode is SemanticsMode.DETERMINISTIC:
        return lambda model, x, rng=None, tape=None: exact_gradient(model, x, tape)
    cfg = cfg or EstimatorConfig(mode=mode)
    if mode is SemanticsMode.NONDETERMINISM:
        return lambda model, x, rng, tape=None: nondeterminism_gradient(model, x, cfg, rng, tape)
    return lambda model, x, rng, tape=None: marginalization_gradient(model, x, cfg, rng, tape)
