import math

import numpy as np
import pytest

from stochpp import HmcConfig, RngStream, SghmcConfig, run_chain, run_chains
from stochpp.distributions import normal_logpdf
from stochpp.errors import DomainError, ModeMismatch, SamplerError
from stochpp.estimators import estimator_for
from stochpp.model import EnumerableModel, Model, SemanticsMode, evaluate
from stochpp.models import StdNormal, SurveyDeterministic
from stochpp.samplers import ChainState, hmc_step, leapfrog, sghmc_step


def quad(x):
    return -0.5 * float(x @ x), -x


def flat(x):
    return 0.0, np.zeros_like(x)


class Flat(Model):
    def dimension(self):
        return 2

    def observe(self, x, tape, rng=None):
        return 0.0 * x[0] + 0.0 * x[1]


class ShiftedPair(EnumerableModel):
    """Nondeterministic: x ~ N(+-1, 1) with a fair choice; the averaged
    log density is -x^2/2 + const, i.e. a standard normal target."""

    mode = SemanticsMode.NONDETERMINISM

    def dimension(self):
        return 1

    def draw(self, rng):
        return 1.0 if rng.random() < 0.5 else -1.0

    def observe_given(self, x, tape, z):
        return normal_logpdf(z, 1.0, x[0])

    def n_outcomes(self):
        return 2

    def outcomes(self):
        yield 0.5, 1.0
        yield 0.5, -1.0


class TestLeapfrog:
    def test_energy_conserved(self):
        s = ChainState([1.0, -0.5], [0.3, 0.8])
        end, (logp, _) = leapfrog(quad, s, 0.01, 100)
        h0 = 0.5 * (1.25 + 0.73)
        h1 = -logp + 0.5 * float(end.r @ end.r)
        assert abs(h1 - h0) < 1e-3

    def test_reversible(self):
        s = ChainState([1.0, -0.5], [0.3, 0.8])
        mid, _ = leapfrog(quad, s, 0.1, 25)
        back, _ = leapfrog(quad, ChainState(mid.x, -mid.r), 0.1, 25)
        np.testing.assert_allclose(back.x, s.x, atol=1e-10)
        np.testing.assert_allclose(-back.r, s.r, atol=1e-10)

    def test_zero_field(self):
        end, _ = leapfrog(flat, ChainState([0.0, 1.0], [2.0, -1.0]), 0.1, 10, mass=2.0)
        np.testing.assert_allclose(end.x, [1.0, 0.5], atol=1e-14)
        np.testing.assert_array_equal(end.r, [2.0, -1.0])

    def test_mismatched_state(self):
        with pytest.raises(DomainError):
            ChainState([0.0], [0.0, 1.0])


class TestSghmc:
    def test_no_friction_matches_leapfrog(self):
        model = StdNormal(2)
        est = estimator_for(SemanticsMode.DETERMINISTIC)
        x0, r0, eps, n = np.array([0.8, -1.1]), np.array([0.4, 0.2]), 0.05, 30
        g0 = evaluate(model, x0)[1]
        cfg = SghmcConfig(eps, n, friction=0.0)
        state, _, diverged = sghmc_step(model, ChainState(x0, r0 - 0.5 * eps * g0), cfg, est,
                                        RngStream(1), resample_momentum=False)
        ref, _ = leapfrog(lambda x: evaluate(model, x), ChainState(x0, r0), eps, n)
        assert not diverged
        np.testing.assert_allclose(state.x, ref.x, atol=1e-10)

    def test_friction_decay(self):
        cfg = SghmcConfig(0.1, 20, friction=2.0, mass=1.0, noise=False)
        est = estimator_for(SemanticsMode.DETERMINISTIC)
        state, _, _ = sghmc_step(Flat(), ChainState([0.0, 0.0], [1.0, -3.0]), cfg, est,
                                 RngStream(1), resample_momentum=False)
        np.testing.assert_allclose(state.r, np.array([1.0, -3.0]) * 0.8 ** 20, rtol=1e-12)

    def test_standard_normal_target(self):
        batch = run_chain(ShiftedPair(), "sghmc", SghmcConfig(0.05, 10, 1.0, n_draws=1), [0.0],
                          4000, 200, 1, RngStream(6))
        s = batch.samples[:, 0]
        assert abs(s.mean()) < 0.1
        assert abs(s.var() - 1.0) < 0.15

    def test_divergence_limit(self):
        with pytest.raises(SamplerError, match="diverged"):
            run_chain(ShiftedPair(), "sghmc", SghmcConfig(10.0, 400, 0.0), [0.0], 20, 0, 1,
                      RngStream(1))


class TestHmc:
    def test_standard_normal_chi2(self):
        batch = run_chain(StdNormal(1), "hmc", HmcConfig(0.25, 8), [0.0], 5000, 200, 2,
                          RngStream(7))
        s = batch.samples[:, 0]
        # decile edges of N(0, 1)
        edges = [-1.2815516, -0.8416212, -0.5244005, -0.2533471, 0.0,
                 0.2533471, 0.5244005, 0.8416212, 1.2815516]
        counts = np.bincount(np.searchsorted(edges, s), minlength=10)
        chi2 = float(((counts - 500.0) ** 2 / 500.0).sum())
        # 0.999 quantile of chi-square with 9 degrees of freedom
        assert chi2 < 27.877
        assert batch.accept_rate > 0.9

    def test_forced_rejection(self):
        state = ChainState([0.3], [0.0])
        for seed in range(20):
            new, ok, _ = hmc_step(StdNormal(1), state, HmcConfig(100.0, 3), RngStream(seed))
            assert not ok and new.x[0] == 0.3

    def test_tiny_steps_accept(self):
        batch = run_chain(StdNormal(2), "hmc", HmcConfig(1e-4, 1), [0.5, -0.5], 2000, 0, 1,
                          RngStream(2))
        assert batch.accept_rate > 0.999

    def test_requires_deterministic(self):
        with pytest.raises(ModeMismatch):
            hmc_step(ShiftedPair(), ChainState([0.0], [0.0]), HmcConfig(), RngStream(1))


class TestRunChain:
    def test_seed_determinism(self):
        cfg = HmcConfig(0.2, 5)
        a = run_chains(SurveyDeterministic([True, False, True]), "hmc", cfg, [0.0], 50, 10,
                       seed=3, chains=2)
        b = run_chains(SurveyDeterministic([True, False, True]), "hmc", cfg, [0.0], 50, 10,
                       seed=3, chains=2)
        for u, v in zip(a, b):
            assert u.samples.tobytes() == v.samples.tobytes()
        assert a[0].samples.tobytes() != a[1].samples.tobytes()

    def test_thinning(self):
        batch = run_chain(StdNormal(1), "hmc", HmcConfig(0.2, 5), [0.0], 10, 5, 3, RngStream(1))
        np.testing.assert_array_equal(batch.iters, 5 + 3 * np.arange(10) + 2)

    def test_mode_checks(self):
        with pytest.raises(ModeMismatch):
            run_chain(StdNormal(1), "sghmc", SghmcConfig(), [0.0], 10)
        with pytest.raises(ModeMismatch):
            run_chain(ShiftedPair(), "mhmc", SghmcConfig(), [0.0], 10)
        with pytest.raises(ValueError):
            run_chain(StdNormal(1), "nuts", HmcConfig(), [0.0], 10)

    def test_bad_configs(self):
        with pytest.raises(DomainError):
            HmcConfig(step_size=0.0)
        with pytest.raises(DomainError):
            SghmcConfig(friction=-1.0)
