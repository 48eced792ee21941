"""Log-densities and samplers for Normal, Flip (Bernoulli), Beta and uniform categorical.

Log-densities are single fused tape nodes with hand-coded partials, which
keeps the tape short for models that loop over many observations.
"""

import math

import numpy as np

from .ad import ADValue, _emit, lift
from .errors import DomainError

HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


class RngStream:
    """Seeded, splittable random stream.

    Backed by the PCG64 bit generator; a stream is identified by its seed and
    a tuple of stream ids, so children derived with :meth:`child` are
    reproducible and independent of each other and of the parent.
    """

    def __init__(self, seed, stream_id=()):
        if isinstance(stream_id, int):
            stream_id = (stream_id,)
        self.seed = int(seed)
        self.stream_id = tuple(stream_id)
        ss = np.random.SeedSequence(self.seed, spawn_key=self.stream_id)
        self._gen = np.random.Generator(np.random.PCG64(ss))

    def __repr__(self):
        return f"RngStream(seed={self.seed}, stream_id={self.stream_id})"

    def child(self, stream_id):
        return RngStream(self.seed, self.stream_id + (int(stream_id),))

    def random(self, size=None):
        """Uniform draw(s) from [0, 1)."""
        return self._gen.random(size)

    def standard_normal(self, size=None):
        return self._gen.standard_normal(size)

    def integers(self, n):
        return int(self._gen.integers(n))

    def choice_index(self, n, size):
        return self._gen.integers(n, size=size)


def normal_logpdf(mu, sigma, x):
    """log N(x; mu, sigma^2); all three arguments may be differentiable."""
    mu = lift(mu)
    sigma = lift(sigma)
    x = lift(x)
    s = sigma.value
    if not s > 0.0:
        raise DomainError(f"normal_logpdf: sigma {s!r} is not positive")
    z = (x.value - mu.value) / s
    v = -math.log(s) - HALF_LOG_2PI - 0.5 * z * z
    dmu = z / s
    return _emit(v, (mu, sigma, x), (dmu, (z * z - 1.0) / s, -dmu))


def flip_logp(theta, y):
    """log P(y | theta) for a single coin flip with head probability ``theta``."""
    theta = lift(theta)
    t = theta.value
    if not 0.0 <= t <= 1.0:
        raise DomainError(f"flip_logp: theta {t!r} outside [0, 1]")
    if y:
        if t == 0.0:
            return _impossible(theta, "flip_logp(theta=0, y=True)")
        return _emit(math.log(t), (theta,), (1.0 / t,))
    if t == 1.0:
        return _impossible(theta, "flip_logp(theta=1, y=False)")
    return _emit(math.log1p(-t), (theta,), (-1.0 / (1.0 - t),))


def _impossible(arg, factor):
    if arg.tape is None:
        return ADValue(-math.inf)
    arg.tape.mark_impossible(factor)
    # stay on the tape so that the mark reaches gradient()
    return _emit(-math.inf, (arg,), (0.0,))


def beta_logpdf(alpha, beta, theta):
    """log Beta(theta; alpha, beta)."""
    if not (alpha > 0.0 and beta > 0.0):
        raise DomainError(f"beta_logpdf: alpha={alpha!r}, beta={beta!r} must be positive")
    theta = lift(theta)
    t = theta.value
    if not 0.0 < t < 1.0:
        raise DomainError(f"beta_logpdf: theta {t!r} outside (0, 1)")
    log_b = math.lgamma(alpha) + math.lgamma(beta) - math.lgamma(alpha + beta)
    v = (alpha - 1.0) * math.log(t) + (beta - 1.0) * math.log1p(-t) - log_b
    d = (alpha - 1.0) / t - (beta - 1.0) / (1.0 - t)
    return _emit(v, (theta,), (d,))


def sample_normal(rng, mu, sigma):
    if sigma < 0.0:
        raise DomainError(f"sample_normal: sigma {sigma!r} is negative")
    return mu + sigma * rng.standard_normal()


def sample_bernoulli(rng, p):
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"sample_bernoulli: p {p!r} outside [0, 1]")
    return rng.random() < p


def sample_uniform_int(rng, n):
    if n < 1:
        raise DomainError(f"sample_uniform_int: n {n!r} must be at least 1")
    return rng.integers(n)


def normal_logpdf_sum(mu, sigma, xs):
    """Sum of log N(x_i; mu, sigma^2) over the observations ``xs`` as one node."""
    mu = lift(mu)
    sigma = lift(sigma)
    s = sigma.value
    if not s > 0.0:
        raise DomainError(f"normal_logpdf_sum: sigma {s!r} is not positive")
    xs = np.asarray(xs, dtype=float)
    n = xs.shape[0]
    z = (xs - mu.value) / s
    zz = float(np.dot(z, z))
    v = -n * (math.log(s) + HALF_LOG_2PI) - 0.5 * zz
    return _emit(v, (mu, sigma), (float(z.sum()) / s, (zz - n) / s))
