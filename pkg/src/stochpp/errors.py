"""Exception hierarchy shared by the whole package."""


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class TapeError(RuntimeError):
    """Values from different tapes were mixed, or a tape was misused."""


class NonFiniteObjective(ArithmeticError):
    """The differentiated objective is not a finite number."""

    def __init__(self, detail):
        super().__init__(f"non-finite objective: {detail}")
        self.detail = detail


class EvaluationImpossible(NonFiniteObjective):
    """The log-probability is -inf: some factor of the trace vanished."""

    def __init__(self, factor, index=None):
        self.factor = factor
        self.index = index
        where = "" if index is None else f" (draw {index})"
        super().__init__(f"log-probability is -inf, vanishing factor {factor}{where}")


class NumericalError(NonFiniteObjective):
    """The log-probability or its gradient is NaN or +inf."""


class ModeMismatch(ValueError):
    """An estimator or sampler was paired with a model of the wrong semantics."""


class DivergentTrajectory(ArithmeticError):
    """A simulated trajectory produced a non-finite position or momentum."""


class SamplerError(RuntimeError):
    """A chain could not be completed (e.g. too many divergent steps)."""
