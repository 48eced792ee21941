"""Case-study model pairs: each stochastic program with its deterministic counterpart."""

from .ball import BallDeterministic, BallParams, BallStochastic, sin2alpha_optimum
from .data import load_column
from .gmm import GmmData, GmmDeterministic, GmmStochastic, relabel_by_mean
from .reference import StdNormal
from .survey import (
    AlwaysHonest,
    CoinSource,
    FairCoins,
    MarkovCoins,
    SurveyBlackbox,
    SurveyDeterministic,
    SurveyStochastic,
)

__all__ = [
    "AlwaysHonest",
    "BallDeterministic",
    "BallParams",
    "BallStochastic",
    "CoinSource",
    "FairCoins",
    "GmmData",
    "GmmDeterministic",
    "GmmStochastic",
    "MarkovCoins",
    "StdNormal",
    "SurveyBlackbox",
    "SurveyDeterministic",
    "SurveyStochastic",
    "load_column",
    "relabel_by_mean",
    "sin2alpha_optimum",
]
