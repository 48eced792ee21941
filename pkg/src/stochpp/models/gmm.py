"""Gaussian mixture with equal, fixed weights.

Parameters are laid out as ``x = [mu_0, log sigma_0, mu_1, log sigma_1, ...]``
with flat priors on that scale.  The deterministic model sums an unweighted
log-sum-exp over components, so its log-density exceeds the properly
weighted mixture by the constant ``n * log K``; gradients are unaffected.
"""

import itertools
from dataclasses import dataclass

import numpy as np

from ..ad import _emit, ad_sum, unary
from ..distributions import HALF_LOG_2PI, normal_logpdf_sum
from ..errors import DomainError
from ..model import EnumerableModel, Model, SemanticsMode


@dataclass(frozen=True, eq=False)
class GmmData:
    data: np.ndarray
    n_comp: int

    def __post_init__(self):
        data = np.asarray(self.data, dtype=float)
        if data.ndim != 1 or data.shape[0] == 0:
            raise DomainError("GMM data must be a non-empty vector")
        if self.n_comp < 1:
            raise DomainError(f"n_comp must be at least 1, got {self.n_comp}")
        object.__setattr__(self, "data", data)


class _Gmm:
    def __init__(self, data):
        self.d = data

    def dimension(self):
        return 2 * self.d.n_comp

    def _components(self, x):
        k = self.d.n_comp
        mu = [x[2 * j] for j in range(k)]
        sigma = [unary("exp", x[2 * j + 1]) for j in range(k)]
        return mu, sigma


class GmmDeterministic(_Gmm, Model):
    def observe(self, x, tape, rng=None):
        mu, sigma = self._components(x)
        data = self.d.data
        m = np.array([v.value for v in mu])[:, None]
        s = np.array([v.value for v in sigma])[:, None]
        z = (data[None, :] - m) / s
        # per-component, per-point log-densities, shape (K, n)
        lj = -np.log(s) - HALF_LOG_2PI - 0.5 * z * z
        top = lj.max(axis=0)
        ll = top + np.log(np.exp(lj - top).sum(axis=0))
        resp = np.exp(lj - ll)
        dmu = (resp * z / s).sum(axis=1)
        dsigma = (resp * (z * z - 1.0) / s).sum(axis=1)
        operands = mu + sigma
        partials = [float(v) for v in dmu] + [float(v) for v in dsigma]
        return _emit(float(ll.sum()), operands, partials)


class GmmStochastic(_Gmm, EnumerableModel):
    """Each observation draws its component uniformly; ``z[i]`` is its index."""

    mode = SemanticsMode.MARGINALIZATION

    def draw(self, rng):
        return rng.choice_index(self.d.n_comp, len(self.d.data))

    def observe_given(self, x, tape, z):
        mu, sigma = self._components(x)
        z = np.asarray(z)
        data = self.d.data
        terms = []
        for j in range(self.d.n_comp):
            pts = data[z == j]
            if pts.shape[0]:
                terms.append(normal_logpdf_sum(mu[j], sigma[j], pts))
        return ad_sum(terms)

    def n_outcomes(self):
        return self.d.n_comp ** len(self.d.data)

    def outcomes(self):
        k = self.d.n_comp
        n = len(self.d.data)
        w = float(k) ** -n
        for z in itertools.product(range(k), repeat=n):
            yield w, z


def relabel_by_mean(samples, n_comp):
    """Reorder components within each sample by increasing mean.

    Mixture posteriors are invariant under permutation of component labels;
    sorting breaks the symmetry before summarizing.
    """
    samples = np.asarray(samples, dtype=float)
    pairs = samples.reshape(samples.shape[0], n_comp, 2)
    order = np.argsort(pairs[:, :, 0], axis=1, kind="stable")
    pairs = np.take_along_axis(pairs, order[:, :, None], axis=1)
    return pairs.reshape(samples.shape[0], 2 * n_comp)
