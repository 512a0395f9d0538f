"""Evaluation context and working-precision management.

Every public numerical routine accepts an optional ``ctx`` keyword.  The
outermost call raises mpmath's precision to ``precision_digits +
guard_digits`` and rounds its result back to ``precision_digits``.  Nested
calls run inside the caller's working precision and are not rounded.

mpmath keeps its precision in process-global state, so concurrent
evaluation should use processes rather than threads.
"""
from __future__ import annotations

import contextvars
import functools
from contextlib import contextmanager
from dataclasses import dataclass, replace

import mpmath as mp


@dataclass(frozen=True)
class EvalContext:
    precision_digits: int = 30
    guard_digits: int = 15
    max_terms: int = 10**6
    quad_level: int = 10
    seed: int = 42

    def __post_init__(self):
        if int(self.precision_digits) < 15:
            raise ValueError("precision_digits must be at least 15")
        if int(self.guard_digits) < 5:
            raise ValueError("guard_digits must be at least 5")
        if int(self.max_terms) < 1000:
            raise ValueError("max_terms must be at least 1000")
        if int(self.quad_level) < 1:
            raise ValueError("quad_level must be positive")
        if not -(2**63) <= int(self.seed) < 2**64:
            raise ValueError("seed must fit in 64 bits")

    @property
    def working_digits(self) -> int:
        return self.precision_digits + self.guard_digits

    @property
    def tol(self):
        """10^-precision_digits as an mpf."""
        return mp.mpf(10) ** (-self.precision_digits)

    def with_precision(self, digits: int) -> "EvalContext":
        return replace(self, precision_digits=digits)


DEFAULT_CONTEXT = EvalContext()

_ACTIVE: contextvars.ContextVar[EvalContext | None] = contextvars.ContextVar(
    "plab_active_context", default=None
)


def current() -> EvalContext:
    """Context of the innermost running evaluation (or the default)."""
    return _ACTIVE.get() or DEFAULT_CONTEXT


@contextmanager
def working(ctx: EvalContext | None = None):
    """Run a block at ``ctx``'s working precision with ``ctx`` active."""
    ctx = ctx or DEFAULT_CONTEXT
    token = _ACTIVE.set(ctx)
    try:
        with mp.workdps(ctx.working_digits):
            yield ctx
    finally:
        _ACTIVE.reset(token)


def rounded(value, digits: int):
    """Round mpmath numbers (or tuples of them) to ``digits`` significant digits."""
    if isinstance(value, (mp.mpf, mp.mpc)):
        with mp.workdps(digits):
            return +value
    if isinstance(value, tuple) and not hasattr(value, "_fields"):
        return tuple(rounded(v, digits) for v in value)
    return value


def evaluates(fn):
    """Decorator giving ``fn`` a ``ctx`` keyword with the precision rules above."""

    @functools.wraps(fn)
    def wrapper(*args, ctx: EvalContext | None = None, **kwargs):
        if ctx is None and _ACTIVE.get() is not None:
            return fn(*args, **kwargs)
        ctx = ctx or DEFAULT_CONTEXT
        with working(ctx):
            value = fn(*args, **kwargs)
        return rounded(value, ctx.precision_digits)

    return wrapper


def eps():
    """Unit roundoff target at the current working precision."""
    return mp.mpf(10) ** (-mp.mp.dps)
