"""Ball throw at a basket: choose the angle under random throw velocity.

The parameter is ``x = logit(sin 2*alpha)``.  A throw with speed ``v`` lands
at ``v**2 / g * sin 2*alpha`` and the program scores it with a unit normal
around the basket distance.  The velocity is either weak (``vw``) or strong
(``vs``) with equal probability; the stochastic program picks one at random,
the deterministic one averages the two log-densities.

With ``prior=True`` a Normal(pi/4, pi/8) prior on the angle ``alpha`` is
added, including the log-Jacobian of ``x -> alpha``.  Only angles in
``(0, pi/4]`` are representable by this parameterization.
"""

import math
from dataclasses import dataclass

from ..ad import _emit, sigm
from ..distributions import normal_logpdf
from ..errors import DomainError
from ..model import EnumerableModel, Model, SemanticsMode
from .survey import softplus

G = 9.80655


@dataclass(frozen=True)
class BallParams:
    vw: float
    vs: float
    distance: float
    g: float = G

    def __post_init__(self):
        if not (self.vw > 0 and self.vs > 0 and self.distance > 0):
            raise DomainError(f"ball parameters must be positive: {self}")


def sin2alpha_optimum(p):
    """Maximizer in ``s = sin 2*alpha`` of the deterministic (unconstrained) log-density."""
    return p.g * p.distance * (p.vw ** 2 + p.vs ** 2) / (p.vw ** 4 + p.vs ** 4)


def _angle(x):
    # alpha = asin(sigm(x)) / 2, fused so that saturation at s = 1 stays finite
    v = x.value
    s = 1.0 / (1.0 + math.exp(-v)) if v >= 0 else math.exp(v) / (1.0 + math.exp(v))
    one_minus = 1.0 / (1.0 + math.exp(v)) if v <= 0 else math.exp(-v) / (1.0 + math.exp(-v))
    d = 0.5 * s * math.sqrt(one_minus) / math.sqrt(1.0 + s)
    return _emit(0.5 * math.asin(s), (x,), (d,))


def _log_angle_jacobian(x):
    # log d(alpha)/dx = log 1/2 + log s + 1/2 log(1 - s) - 1/2 log(1 + s)
    v = x.value
    s = 1.0 / (1.0 + math.exp(-v)) if v >= 0 else math.exp(v) / (1.0 + math.exp(v))
    val = math.log(0.5) - softplus(-v) - 0.5 * softplus(v) - 0.5 * math.log1p(s)
    d = (1.0 - s) - 0.5 * s - 0.5 * s * (1.0 - s) / (1.0 + s)
    return _emit(val, (x,), (d,))


class _Ball:
    def __init__(self, params, prior=False):
        self.params = params
        self.prior = prior

    def dimension(self):
        return 1

    def _prior(self, x):
        if not self.prior:
            return 0.0
        return normal_logpdf(math.pi / 4, math.pi / 8, _angle(x[0])) + _log_angle_jacobian(x[0])

    def _score(self, v, sin2alpha):
        p = self.params
        d = v * v / p.g * sin2alpha
        return normal_logpdf(p.distance, 1.0, d)


class BallDeterministic(_Ball, Model):
    def observe(self, x, tape, rng=None):
        s = sigm(x[0])
        p = self.params
        return 0.5 * self._score(p.vw, s) + 0.5 * self._score(p.vs, s) + self._prior(x)


class BallStochastic(_Ball, EnumerableModel):
    """``z`` is True for a strong throw."""

    mode = SemanticsMode.NONDETERMINISM

    def draw(self, rng):
        return rng.random() > 0.5

    def observe_given(self, x, tape, z):
        s = sigm(x[0])
        v = self.params.vs if z else self.params.vw
        return self._score(v, s) + self._prior(x)

    def n_outcomes(self):
        return 2

    def outcomes(self):
        yield 0.5, True
        yield 0.5, False
