"""The probabilistic-program contract.

A model maps an unconstrained parameter vector ``x`` to an unnormalized
log-probability.  Deterministic models are pure functions of ``x``.
Stochastic models additionally draw internal randomness ``z`` (nuisance
variables or nondeterministic choices) from an :class:`RngStream`, so the
value they return is itself random.

Stochastic models in this package separate the draw of ``z`` from the
conditional log-probability (:meth:`StochasticModel.draw` and
:meth:`StochasticModel.observe_given`), which lets the oracles substitute
every possible ``z`` when the nuisance space is finite.
"""

import enum
import math
from abc import ABC, abstractmethod

import numpy as np

from .ad import Tape, gradient
from .errors import DomainError, EvaluationImpossible, NonFiniteObjective


class SemanticsMode(enum.Enum):
    DETERMINISTIC = "deterministic"
    MARGINALIZATION = "marginalization"
    NONDETERMINISM = "nondeterminism"


class Model(ABC):
    mode = SemanticsMode.DETERMINISTIC

    @property
    def stochastic(self):
        return self.mode is not SemanticsMode.DETERMINISTIC

    @abstractmethod
    def dimension(self):
        """Length of the parameter vector."""

    @abstractmethod
    def observe(self, x, tape, rng=None):
        """Return log p~(x | y[, z]) as an ADValue; ``x`` is a list of ADValues."""


class StochasticModel(Model):
    """A program whose log-probability depends on internal draws ``z``."""

    mode = SemanticsMode.MARGINALIZATION

    @abstractmethod
    def draw(self, rng):
        """Draw the nuisance assignment ``z ~ p(z | y)``."""

    @abstractmethod
    def observe_given(self, x, tape, z):
        """log p~(x | y, z) for a fixed nuisance assignment."""

    def observe(self, x, tape, rng=None):
        if rng is None:
            raise ValueError(f"{type(self).__name__} is stochastic and needs an rng")
        return self.observe_given(x, tape, self.draw(rng))


class EnumerableModel(StochasticModel):
    """A stochastic model whose nuisance space is finite and known."""

    @abstractmethod
    def n_outcomes(self):
        """Number of distinct nuisance assignments."""

    @abstractmethod
    def outcomes(self):
        """Iterate over ``(prior_weight, z)`` pairs; weights sum to one."""


def check_params(model, x):
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.shape[0] != model.dimension():
        raise DomainError(
            f"parameter vector has shape {x.shape}, model dimension is {model.dimension()}")
    if not np.all(np.isfinite(x)):
        raise DomainError(f"parameter vector is not finite: {x}")
    return x


def _run(model, x, tape, call, checked=False):
    if not checked:
        x = check_params(model, x)
    tape = Tape() if tape is None else tape
    tape.reset()
    xs = [tape.variable(v) for v in x]
    out = call(xs, tape)
    grad = gradient(out, xs)
    return float(out.value), grad


def evaluate(model, x, rng=None, tape=None, checked=False):
    """Log-probability and its gradient at ``x`` on a fresh (or reset) tape."""
    if model.stochastic and rng is None:
        raise ValueError(f"{type(model).__name__} is stochastic and needs an rng")
    return _run(model, x, tape, lambda xs, t: model.observe(xs, t, rng), checked)


def evaluate_given(model, x, z, tape=None):
    """Like :func:`evaluate` with the nuisance assignment fixed to ``z``."""
    return _run(model, x, tape, lambda xs, t: model.observe_given(xs, t, z))


def evaluate_batch(model, x, rng, count, tape=None, tolerate_impossible=False):
    """``count`` independent evaluations, each with fresh draws from ``rng``.

    Returns ``(logps, grads)`` arrays of shapes ``(count,)`` and
    ``(count, dim)``.  With ``tolerate_impossible`` an impossible draw is
    recorded as ``logp = -inf`` with a zero gradient instead of raising.
    """
    if count < 1:
        raise ValueError(f"count must be at least 1, got {count}")
    if not model.stochastic:
        raise ValueError("evaluate_batch requires a stochastic model")
    tape = Tape() if tape is None else tape
    x = check_params(model, x).tolist()
    logps = np.empty(count)
    grads = np.empty((count, len(x)))
    for i in range(count):
        try:
            logps[i], grads[i] = evaluate(model, x, rng, tape, checked=True)
        except NonFiniteObjective as e:
            if tolerate_impossible and isinstance(e, EvaluationImpossible):
                logps[i] = -math.inf
                grads[i] = 0.0
                continue
            e.index = i
            e.args = (f"{e.args[0]} [draw {i}]",)
            raise
    return logps, grads
