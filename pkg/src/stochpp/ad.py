"""Scalar reverse-mode automatic differentiation.

A :class:`Tape` records every operation applied to differentiable scalars
(:class:`ADValue`) together with the local partial derivatives, computed
eagerly at evaluation time.  :func:`gradient` then runs a single backward
sweep and resets the tape so that it can be reused for the next evaluation.

Constants are ``ADValue`` objects without a tape; plain floats are accepted
anywhere an ``ADValue`` is and are lifted implicitly.

    >>> tape = Tape()
    >>> x = tape.variable(3.0)
    >>> y = x * x
    >>> y.value, list(gradient(y, [x]))
    (9.0, [6.0])
"""

import math

import numpy as np

from .errors import DomainError, EvaluationImpossible, NumericalError, TapeError

__all__ = [
    "ADValue",
    "Tape",
    "lift",
    "binary",
    "unary",
    "sigm",
    "log_sum_exp",
    "ad_sum",
    "gradient",
    "value_of",
]


class Tape:
    """Append-only record of operations; one per chain, never shared."""

    __slots__ = ("parents", "partials", "impossible")

    def __init__(self):
        self.parents = []
        self.partials = []
        # description of the first factor that evaluated to -inf, if any
        self.impossible = None

    def __len__(self):
        return len(self.parents)

    def variable(self, value):
        """Create an independent input variable."""
        value = float(value)
        if not math.isfinite(value):
            raise DomainError(f"non-finite input {value!r}")
        self.parents.append(())
        self.partials.append(())
        return ADValue(value, len(self.parents) - 1, self)

    def push(self, value, parents, partials):
        self.parents.append(parents)
        self.partials.append(partials)
        return ADValue(value, len(self.parents) - 1, self)

    def mark_impossible(self, factor):
        if self.impossible is None:
            self.impossible = factor

    def reset(self):
        self.parents.clear()
        self.partials.clear()
        self.impossible = None


class ADValue:
    """A scalar that may be recorded on a tape."""

    __slots__ = ("value", "index", "tape")

    def __init__(self, value, index=None, tape=None):
        self.value = value
        self.index = index
        self.tape = tape

    @property
    def is_constant(self):
        return self.index is None

    def __repr__(self):
        kind = "const" if self.index is None else f"node {self.index}"
        return f"ADValue({self.value!r}, {kind})"

    def __float__(self):
        return float(self.value)

    def __add__(self, other):
        return binary("add", self, other)

    def __radd__(self, other):
        return binary("add", other, self)

    def __sub__(self, other):
        return binary("sub", self, other)

    def __rsub__(self, other):
        return binary("sub", other, self)

    def __mul__(self, other):
        return binary("mul", self, other)

    def __rmul__(self, other):
        return binary("mul", other, self)

    def __truediv__(self, other):
        return binary("div", self, other)

    def __rtruediv__(self, other):
        return binary("div", other, self)

    def __pow__(self, other):
        return binary("pow", self, other)

    def __rpow__(self, other):
        return binary("pow", other, self)

    def __neg__(self):
        return unary("neg", self)


def lift(c):
    """Inject a constant; its adjoint is discarded."""
    if isinstance(c, ADValue):
        return c
    c = float(c)
    if not math.isfinite(c):
        raise DomainError(f"non-finite constant {c!r}")
    return ADValue(c)


def value_of(a):
    return a.value if isinstance(a, ADValue) else float(a)


def _as_ad(a):
    if isinstance(a, ADValue):
        return a
    return lift(a)


def _emit(value, operands, partials):
    """Record ``value`` with the given local partials, dropping constants."""
    tape = None
    parents = []
    kept = []
    for a, d in zip(operands, partials):
        if a.index is None:
            continue
        if tape is None:
            tape = a.tape
        elif a.tape is not tape:
            raise TapeError("operands recorded on different tapes")
        parents.append(a.index)
        kept.append(d)
    if tape is None:
        return ADValue(value)
    return tape.push(value, tuple(parents), tuple(kept))


def binary(op, a, b):
    """Apply one of ``add, sub, mul, div, pow`` and record the partials."""
    a = _as_ad(a)
    b = _as_ad(b)
    av, bv = a.value, b.value
    if op == "add":
        return _emit(av + bv, (a, b), (1.0, 1.0))
    if op == "sub":
        return _emit(av - bv, (a, b), (1.0, -1.0))
    if op == "mul":
        return _emit(av * bv, (a, b), (bv, av))
    if op == "div":
        if bv == 0.0:
            raise DomainError("div: division by zero")
        return _emit(av / bv, (a, b), (1.0 / bv, -av / (bv * bv)))
    if op == "pow":
        integral = float(bv).is_integer()
        if av <= 0.0 and not integral:
            raise DomainError(f"pow: negative base {av!r} with non-integer exponent")
        if av <= 0.0 and b.index is not None:
            raise DomainError("pow: exponent derivative undefined for non-positive base")
        if av == 0.0 and bv < 0.0:
            raise DomainError("pow: zero base with negative exponent")
        v = av ** bv
        da = bv * av ** (bv - 1.0) if bv != 0.0 else 0.0
        db = v * math.log(av) if av > 0.0 else 0.0
        return _emit(v, (a, b), (da, db))
    raise ValueError(f"unknown binary op {op!r}")


def unary(op, a):
    """Apply one of ``neg, log, exp, sin, cos, sqrt, asin``."""
    a = _as_ad(a)
    v = a.value
    if op == "neg":
        return _emit(-v, (a,), (-1.0,))
    if op == "log":
        if v <= 0.0:
            raise DomainError(f"log: argument {v!r} is not positive")
        return _emit(math.log(v), (a,), (1.0 / v,))
    if op == "exp":
        e = math.exp(v)
        return _emit(e, (a,), (e,))
    if op == "sin":
        return _emit(math.sin(v), (a,), (math.cos(v),))
    if op == "cos":
        return _emit(math.cos(v), (a,), (-math.sin(v),))
    if op == "sqrt":
        if v <= 0.0:
            raise DomainError(f"sqrt: argument {v!r} is not positive")
        s = math.sqrt(v)
        return _emit(s, (a,), (0.5 / s,))
    if op == "asin":
        if not -1.0 < v < 1.0:
            raise DomainError(f"asin: argument {v!r} outside (-1, 1)")
        return _emit(math.asin(v), (a,), (1.0 / math.sqrt(1.0 - v * v),))
    raise ValueError(f"unknown unary op {op!r}")


def log(a):
    return unary("log", a)


def exp(a):
    return unary("exp", a)


def sin(a):
    return unary("sin", a)


def cos(a):
    return unary("cos", a)


def sqrt(a):
    return unary("sqrt", a)


def asin(a):
    return unary("asin", a)


def sigm(a):
    """Logistic sigmoid, branch-wise so that neither side overflows."""
    a = _as_ad(a)
    v = a.value
    if v >= 0.0:
        s = 1.0 / (1.0 + math.exp(-v))
    else:
        e = math.exp(v)
        s = e / (1.0 + e)
    return _emit(s, (a,), (s * (1.0 - s),))


def log_sum_exp(*terms):
    """``log(sum(exp(t)))`` with max-shift; the gradient is the softmax."""
    if not terms:
        raise ValueError("log_sum_exp needs at least one term")
    terms = [_as_ad(t) for t in terms]
    m = max(t.value for t in terms)
    if m == -math.inf:
        return _emit(-math.inf, terms, [0.0] * len(terms))
    if m == math.inf:
        return _emit(math.inf, terms, [0.0] * len(terms))
    v = m + math.log(math.fsum(math.exp(t.value - m) for t in terms))
    return _emit(v, terms, [math.exp(t.value - v) for t in terms])


def ad_sum(terms):
    """Sum many values as a single tape node."""
    terms = [_as_ad(t) for t in terms]
    total = math.fsum(t.value for t in terms) if terms else 0.0
    return _emit(total, terms, [1.0] * len(terms))


def gradient(output, inputs):
    """Derivatives of ``output`` with respect to each of ``inputs``.

    Runs one backward sweep over the tape and then resets it.  Raises
    :class:`EvaluationImpossible` for a ``-inf`` objective and
    :class:`NumericalError` for NaN or ``+inf``.
    """
    output = _as_ad(output)
    v = output.value
    tape = output.tape
    if not math.isfinite(v):
        factor = tape.impossible if tape is not None else None
        if tape is not None:
            tape.reset()
        if v == -math.inf:
            raise EvaluationImpossible(factor or "objective")
        raise NumericalError(f"objective is {v!r}")
    for x in inputs:
        if x.index is None:
            continue
        if tape is not None and x.tape is not tape:
            raise TapeError("input recorded on a foreign tape")
    if tape is None:
        # output does not depend on any recorded variable
        return np.zeros(len(inputs))

    parents = tape.parents
    partials = tape.partials
    adj = [0.0] * (output.index + 1)
    adj[output.index] = 1.0
    for i in range(output.index, -1, -1):
        g = adj[i]
        if g == 0.0:
            continue
        for p, d in zip(parents[i], partials[i]):
            adj[p] += g * d
    grad = [0.0 if x.index is None or x.index > output.index else adj[x.index] for x in inputs]
    tape.reset()
    if not all(map(math.isfinite, grad)):
        raise NumericalError(f"gradient is not finite: {grad}")
    return np.array(grad)
