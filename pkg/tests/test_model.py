import math

import numpy as np
import pytest

from stochpp import RngStream, evaluate, evaluate_batch
from stochpp.errors import DomainError, EvaluationImpossible
from stochpp.model import SemanticsMode, evaluate_given
from stochpp.models import (
    BallDeterministic,
    BallParams,
    BallStochastic,
    SurveyDeterministic,
    SurveyStochastic,
)
from stochpp.distributions import normal_logpdf
from stochpp.oracles import finite_diff_grad


class TestEvaluate:
    def test_deterministic_survey(self):
        model = SurveyDeterministic([True])
        logp, grad = evaluate(model, [0.0])
        assert logp == pytest.approx(math.log(0.5), abs=1e-12)
        fd = finite_diff_grad(lambda x: evaluate(model, x)[0], np.array([0.0]))
        # d/dx log(0.5 sigm(x) + 0.25) = 0.5 * 0.25 / 0.5 at x = 0
        assert grad[0] == pytest.approx(0.25, abs=1e-15)
        assert grad[0] == pytest.approx(fd[0], rel=1e-8)

    def test_ball_equal_velocities(self):
        p = BallParams(9.0, 9.0, 7.0)
        x = 0.4
        s = 1 / (1 + math.exp(-x))
        logp, _ = evaluate(BallDeterministic(p), [x])
        assert logp == pytest.approx(normal_logpdf(7.0, 1.0, 81 / p.g * s).value, rel=1e-15)

    def test_stochastic_repeatable(self):
        model = SurveyStochastic([True, False, True, True])
        a = evaluate(model, [0.3], RngStream(5))
        b = evaluate(model, [0.3], RngStream(5))
        assert a[0] == b[0] and a[1].tobytes() == b[1].tobytes()

    def test_deterministic_pure(self):
        model = SurveyDeterministic([True, False, True])
        a, b = evaluate(model, [1.1]), evaluate(model, [1.1])
        assert a[0] == b[0] and a[1].tobytes() == b[1].tobytes()

    def test_stochastic_needs_rng(self):
        with pytest.raises(ValueError, match="rng"):
            evaluate(SurveyStochastic([True]), [0.0])

    def test_dimension_mismatch(self):
        with pytest.raises(DomainError, match="dimension"):
            evaluate(SurveyDeterministic([True]), [0.0, 1.0])

    def test_non_finite_params(self):
        with pytest.raises(DomainError):
            evaluate(SurveyDeterministic([True]), [math.nan])

    def test_impossible_names_factor(self):
        model = SurveyStochastic([False])
        with pytest.raises(EvaluationImpossible, match="theta=1") as info:
            evaluate_given(model, [40.0], (True,))
        assert "theta=1" in info.value.factor

    def test_grad_length(self):
        for model in (SurveyDeterministic([True]), BallDeterministic(BallParams(8, 10, 8))):
            assert evaluate(model, [0.2])[1].shape == (model.dimension(),)


class TestEvaluateBatch:
    def test_single(self):
        model = SurveyStochastic([True, False])
        logps, grads = evaluate_batch(model, [0.2], RngStream(8), 1)
        logp, grad = evaluate(model, [0.2], RngStream(8))
        assert logps[0] == logp and np.array_equal(grads[0], grad)

    def test_ball_branch_frequency(self):
        p = BallParams(8.0, 10.0, 8.0)
        model = BallStochastic(p)
        logps, _ = evaluate_batch(model, [0.5], RngStream(21), 10 ** 4)
        strong, _ = evaluate_given(model, [0.5], True)
        freq = np.mean(logps == strong)
        assert set(np.unique(logps)) <= {strong, evaluate_given(model, [0.5], False)[0]}
        assert abs(freq - 0.5) < 0.015

    def test_zero_count(self):
        with pytest.raises(ValueError):
            evaluate_batch(SurveyStochastic([True]), [0.0], RngStream(1), 0)

    def test_error_annotated_with_index(self):
        model = SurveyStochastic([False] * 3)
        with pytest.raises(EvaluationImpossible, match=r"\[draw \d+\]"):
            evaluate_batch(model, [40.0], RngStream(1), 50)

    def test_tolerate_impossible(self):
        model = SurveyStochastic([False] * 3)
        logps, grads = evaluate_batch(model, [40.0], RngStream(1), 50, tolerate_impossible=True)
        assert np.any(np.isneginf(logps)) and np.any(np.isfinite(logps))
        assert np.all(grads[np.isneginf(logps)] == 0.0)

    def test_modes(self):
        assert SurveyStochastic([True]).mode is SemanticsMode.MARGINALIZATION
        assert BallStochastic(BallParams(1, 2, 3)).mode is SemanticsMode.NONDETERMINISM
        assert SurveyDeterministic([True]).mode is SemanticsMode.DETERMINISTIC
