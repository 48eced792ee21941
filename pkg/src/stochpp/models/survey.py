"""Randomized-response compensation survey.

Each respondent flips a coin: on heads they answer honestly (``yes`` with
probability ``theta``), on tails they flip again and answer with the second
coin.  The single parameter is ``x = logit(theta)``.

By default no prior term is added, so ``x`` has a flat improper prior (the
likelihood is bounded away from zero, hence the posterior over ``x`` is
improper too).  ``prior=True`` adds the uniform Beta(1, 1) prior on
``theta`` expressed on the ``x`` scale, i.e. the log-Jacobian
``log theta + log(1 - theta)``.
"""

import itertools
import math
from abc import ABC, abstractmethod

from ..ad import _emit, ad_sum, log_sum_exp, sigm
from ..distributions import flip_logp
from ..errors import DomainError
from ..model import EnumerableModel, Model, SemanticsMode, StochasticModel

LOG_HALF = math.log(0.5)


def softplus(v):
    return max(v, 0.0) + math.log1p(math.exp(-abs(v)))


def log_sigm_jacobian(x):
    """log(d sigm(x)/dx) = log sigm(x) + log sigm(-x), stable for any x."""
    v = x.value
    s = 1.0 / (1.0 + math.exp(-v)) if v >= 0 else math.exp(v) / (1.0 + math.exp(v))
    return _emit(-softplus(v) - softplus(-v), (x,), (1.0 - 2.0 * s,))


class _Survey:
    def __init__(self, y, prior=False):
        y = tuple(bool(v) for v in y)
        if not y:
            raise DomainError("survey needs at least one answer")
        self.y = y
        self.prior = prior

    def dimension(self):
        return 1

    @staticmethod
    def _counts(answers):
        n_yes = sum(answers)
        return (True, n_yes), (False, len(answers) - n_yes)

    def _theta(self, x):
        theta = sigm(x[0])
        prior = log_sigm_jacobian(x[0]) if self.prior else 0.0
        return theta, prior


class SurveyDeterministic(_Survey, Model):
    """Coin flip marginalized by hand inside the program."""

    def observe(self, x, tape, rng=None):
        theta, lp = self._theta(x)
        # identical answers contribute identical terms
        terms = [count * log_sum_exp(flip_logp(theta, yi) + LOG_HALF,
                                     flip_logp(0.5, yi) + LOG_HALF)
                 for yi, count in self._counts(self.y) if count]
        return ad_sum(terms) + lp


class SurveyStochastic(_Survey, EnumerableModel):
    """Coin flips drawn inside the program; ``z[i]`` is True on heads."""

    mode = SemanticsMode.MARGINALIZATION

    def draw(self, rng):
        return tuple(rng.random(len(self.y)) > 0.5)

    def observe_given(self, x, tape, z):
        theta, lp = self._theta(x)
        honest = [yi for yi, heads in zip(self.y, z) if heads]
        random = [yi for yi, heads in zip(self.y, z) if not heads]
        terms = [count * flip_logp(theta, yi) for yi, count in self._counts(honest) if count]
        terms += [count * flip_logp(0.5, yi) for yi, count in self._counts(random) if count]
        return ad_sum(terms) + lp

    def n_outcomes(self):
        return 2 ** len(self.y)

    def outcomes(self):
        w = 0.5 ** len(self.y)
        for z in itertools.product((True, False), repeat=len(self.y)):
            yield w, z


class CoinSource(ABC):
    """Black-box, stationary source of coin flips (True means heads)."""

    @abstractmethod
    def flips(self, rng, n):
        """A sequence of ``n`` consecutive flips driven by ``rng``."""


class FairCoins(CoinSource):
    def flips(self, rng, n):
        return tuple(rng.random(n) > 0.5)


class AlwaysHonest(CoinSource):
    def flips(self, rng, n):
        return (True,) * n


class MarkovCoins(CoinSource):
    """Symmetric two-state chain: each flip repeats the previous with prob ``stay``.

    The first flip is fair, which is the stationary distribution, so every
    single flip is marginally fair while consecutive flips are correlated.
    """

    def __init__(self, stay=0.9):
        if not 0.0 <= stay <= 1.0:
            raise DomainError(f"stay probability {stay!r} outside [0, 1]")
        self.stay = stay

    def flips(self, rng, n):
        out = []
        state = rng.random() > 0.5
        for i in range(n):
            if i > 0 and rng.random() >= self.stay:
                state = not state
            out.append(state)
        return tuple(out)


class SurveyBlackbox(_Survey, StochasticModel):
    """The survey with coin flips taken from an arbitrary :class:`CoinSource`."""

    mode = SemanticsMode.MARGINALIZATION

    def __init__(self, y, coins, prior=False):
        super().__init__(y, prior)
        self.coins = coins

    def draw(self, rng):
        return self.coins.flips(rng, len(self.y))

    def observe_given(self, x, tape, z):
        return SurveyStochastic.observe_given(self, x, tape, z)
