"""HMC, sgHMC and MHMC.

HMC (with Metropolis correction) runs on deterministic models.  sgHMC runs
on nondeterministic models using the prior-draw gradient average; MHMC is
the same friction-damped dynamics driven by the importance-weighted
marginalization gradient.  Neither stochastic-gradient variant has an
accept/reject step.

All samplers work on the potential ``U(x) = -log p~(x)`` with a scalar mass
``m`` (kinetic energy ``r.r / 2m``).
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .ad import Tape
from .errors import (
    DivergentTrajectory,
    DomainError,
    ModeMismatch,
    NonFiniteObjective,
    SamplerError,
)
from .estimators import EstimatorConfig, estimator_for
from .model import SemanticsMode, check_params, evaluate
from .distributions import RngStream

log = logging.getLogger(__name__)

SAMPLER_MODES = {
    "hmc": SemanticsMode.DETERMINISTIC,
    "sghmc": SemanticsMode.NONDETERMINISM,
    "mhmc": SemanticsMode.MARGINALIZATION,
}
DEFAULT_DRAWS = {"sghmc": 1, "mhmc": 10}


@dataclass(frozen=True)
class HmcConfig:
    step_size: float = 0.01
    n_leapfrog: int = 10
    mass: float = 1.0

    def __post_init__(self):
        if not (self.step_size > 0 and self.mass > 0 and self.n_leapfrog >= 1):
            raise DomainError(f"invalid HMC configuration {self}")


@dataclass(frozen=True)
class SghmcConfig:
    step_size: float = 0.01
    n_leapfrog: int = 10
    friction: float = 1.0
    mass: float = 1.0
    n_draws: Optional[int] = None
    # disabling the injected noise leaves pure friction-damped dynamics
    noise: bool = True

    def __post_init__(self):
        if not (self.step_size > 0 and self.mass > 0 and self.n_leapfrog >= 1):
            raise DomainError(f"invalid sgHMC configuration {self}")
        if self.friction < 0:
            raise DomainError(f"friction {self.friction!r} is negative")


@dataclass
class ChainState:
    x: np.ndarray
    r: np.ndarray
    iter: int = 0

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)
        self.r = np.asarray(self.r, dtype=float)
        if self.x.shape != self.r.shape:
            raise DomainError("position and momentum lengths differ")


@dataclass
class SampleBatch:
    samples: np.ndarray
    logps: np.ndarray
    seed: int
    iters: np.ndarray
    chain: int = 0
    accept_rate: Optional[float] = None
    divergences: int = 0
    extra: dict = field(default_factory=dict)

    @property
    def dimension(self):
        return self.samples.shape[1]


def leapfrog(gradfn, state, eps, n_steps, mass=1.0, start=None):
    """Integrate Hamiltonian dynamics for ``n_steps`` leapfrog steps.

    ``gradfn(x)`` returns ``(logp, grad)``; ``start`` may carry that pair at
    ``state.x`` to avoid recomputing it.  Returns the new state and the pair
    at the final position.
    """
    x = state.x.copy()
    r = state.r.copy()
    logp, grad = gradfn(x) if start is None else start
    r = r + 0.5 * eps * grad
    for i in range(n_steps):
        x = x + eps * r / mass
        logp, grad = gradfn(x)
        if i != n_steps - 1:
            r = r + eps * grad
    r = r + 0.5 * eps * grad
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(r)) and math.isfinite(logp)):
        raise DivergentTrajectory(f"non-finite state after {n_steps} steps")
    return ChainState(x, r, state.iter), (logp, grad)


def _kinetic(r, mass):
    return 0.5 * float(r @ r) / mass


def hmc_step(model, state, cfg, rng, current=None, tape=None):
    """One HMC transition.  Returns ``(state, accepted, (logp, grad))``."""
    if model.stochastic:
        raise ModeMismatch("HMC requires a deterministic model")
    tape = Tape() if tape is None else tape

    def gradfn(x):
        return evaluate(model, x, tape=tape)

    if current is None:
        current = gradfn(state.x)
    r0 = math.sqrt(cfg.mass) * rng.standard_normal(state.x.shape[0])
    h0 = -current[0] + _kinetic(r0, cfg.mass)
    try:
        proposal, end = leapfrog(gradfn, ChainState(state.x, r0, state.iter),
                                 cfg.step_size, cfg.n_leapfrog, cfg.mass, start=current)
        h1 = -end[0] + _kinetic(proposal.r, cfg.mass)
        log_accept = h0 - h1
    except (DivergentTrajectory, NonFiniteObjective, OverflowError):
        log_accept = -math.inf
    if not math.isnan(log_accept) and math.log(rng.random()) < log_accept:
        return ChainState(proposal.x, proposal.r, state.iter + 1), True, end
    return ChainState(state.x, r0, state.iter + 1), False, current


def sghmc_step(model, state, cfg, estimator, rng, current=None, tape=None,
               resample_momentum=True):
    """One sgHMC trajectory of ``cfg.n_leapfrog`` inner steps.

    Inner update: ``r += eps*g - eps*C*r/m + N(0, 2*C*eps)``, then
    ``x += eps*r/m``.  ``estimator(model, x, rng, tape)`` supplies the
    gradient estimate ``g``.  Returns ``(state, estimate, diverged)``; on
    divergence the starting position is kept and the momentum reset.
    """
    tape = Tape() if tape is None else tape
    eps, c, m = cfg.step_size, cfg.friction, cfg.mass
    d = state.x.shape[0]
    if current is None:
        current = estimator(model, state.x, rng, tape)
    r = math.sqrt(m) * rng.standard_normal(d) if resample_momentum else state.r.copy()
    x = state.x.copy()
    est = current
    noise_sd = math.sqrt(2.0 * c * eps) if cfg.noise else 0.0
    try:
        for _ in range(cfg.n_leapfrog):
            r = r + eps * est.grad - eps * c * r / m
            if noise_sd:
                r = r + noise_sd * rng.standard_normal(d)
            x = x + eps * r / m
            if not (np.all(np.isfinite(x)) and np.all(np.isfinite(r))):
                raise DivergentTrajectory("non-finite sgHMC state")
            est = estimator(model, x, rng, tape)
    except (DivergentTrajectory, NonFiniteObjective, OverflowError) as e:
        log.debug("divergent sgHMC step at iteration %d: %s", state.iter, e)
        return ChainState(state.x, np.zeros(d), state.iter + 1), current, True
    return ChainState(x, r, state.iter + 1), est, False


def run_chain(model, sampler, cfg, init, n_samples, burnin=0, thin=1, rng=None, chain=0):
    """Run one chain and keep every ``thin``-th state after ``burnin``."""
    if sampler not in SAMPLER_MODES:
        raise ValueError(f"unknown sampler {sampler!r}")
    if model.mode is not SAMPLER_MODES[sampler]:
        raise ModeMismatch(f"{sampler} requires a {SAMPLER_MODES[sampler].value} model, "
                           f"got {model.mode.value}")
    if n_samples < 1 or thin < 1 or burnin < 0:
        raise ValueError("need n_samples >= 1, thin >= 1, burnin >= 0")
    rng = RngStream(0) if rng is None else rng
    x0 = check_params(model, init)
    tape = Tape()
    total = burnin + n_samples * thin
    state = ChainState(x0, np.zeros_like(x0))
    samples = np.empty((n_samples, x0.shape[0]))
    logps = np.empty(n_samples)
    iters = np.empty(n_samples, dtype=int)
    accepted = divergences = kept = 0

    if sampler == "hmc":
        current = evaluate(model, x0, tape=tape)
    else:
        n_draws = cfg.n_draws or DEFAULT_DRAWS[sampler]
        est_fn = estimator_for(model.mode, EstimatorConfig(n_draws, model.mode))
        current = est_fn(model, x0, rng, tape)

    for it in range(total):
        if sampler == "hmc":
            state, ok, current = hmc_step(model, state, cfg, rng, current, tape)
            accepted += ok
            logp = current[0]
        else:
            state, current, diverged = sghmc_step(model, state, cfg, est_fn, rng, current, tape)
            divergences += diverged
            logp = current.logp
        if divergences > 0.5 * total:
            raise SamplerError(f"{divergences} of {total} steps diverged by iteration {it}; "
                               f"reduce the step size")
        if it >= burnin and (it - burnin) % thin == thin - 1:
            samples[kept] = state.x
            logps[kept] = logp
            iters[kept] = it
            kept += 1

    return SampleBatch(
        samples=samples,
        logps=logps,
        seed=rng.seed,
        iters=iters,
        chain=chain,
        accept_rate=accepted / total if sampler == "hmc" else None,
        divergences=divergences,
    )


def run_chains(model, sampler, cfg, init, n_samples, burnin=0, thin=1, seed=0, chains=1):
    """Independent chains on streams ``(seed, chain)``."""
    return [run_chain(model, sampler, cfg, init, n_samples, burnin, thin,
                      RngStream(seed, chain), chain)
            for chain in range(chains)]
