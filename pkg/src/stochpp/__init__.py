"""Probabilistic programs with stochastic log-probabilities, and gradient MCMC for them."""

from .ad import ADValue, Tape, gradient, lift, log_sum_exp, sigm
from .distributions import RngStream
from .estimators import (
    EstimatorConfig,
    GradientEstimate,
    enumerated_gradient,
    exact_gradient,
    marginalization_gradient,
    nondeterminism_gradient,
)
from .model import EnumerableModel, Model, SemanticsMode, StochasticModel, evaluate, evaluate_batch
from .samplers import HmcConfig, SghmcConfig, run_chain, run_chains

__version__ = "0.1.0"
