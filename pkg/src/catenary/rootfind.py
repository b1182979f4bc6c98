"""Guarded Newton iterations and a bisection oracle.

Convergence is always judged on the residual, ``|f(x)| <= tolerance * scale``,
where ``scale`` is a magnitude supplied by the caller for its equation. No line
search or damping is applied: callers are expected to start from guesses for
which plain Newton is safe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import (
    DerivativeVanished,
    MaxIterationsExceeded,
    NoSignChange,
    Overflow,
    SingularJacobian,
)
from .model import SolveTrace

# cosh(710) overflows a double
HYPERBOLIC_ARG_CAP = 700.0


@dataclass(frozen=True)
class SolverOptions:
    tolerance: float = 1e-12
    max_iterations: int = 100

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")


DEFAULT_OPTIONS = SolverOptions()


def check_hyperbolic_arg(u: float) -> float:
    """Return ``u`` unchanged, or raise :class:`Overflow` past the safe range."""
    if not abs(u) <= HYPERBOLIC_ARG_CAP:
        raise Overflow(f"sinh/cosh argument {u!r} exceeds the cap of {HYPERBOLIC_ARG_CAP}")
    return u


def _evaluate(func, x, trace):
    try:
        return func(x)
    except Overflow as exc:
        if exc.trace is None:
            exc.trace = trace(False)
        raise
    except (ZeroDivisionError, OverflowError) as exc:
        raise Overflow(f"residual evaluation failed at {x!r}: {exc}", trace(False)) from exc


def newton_scalar(
    f: Callable[[float], float],
    df: Callable[[float], float],
    x0: float,
    opts: SolverOptions | None = None,
    scale: float = 1.0,
) -> tuple[float, SolveTrace]:
    """Plain Newton iteration for ``f(x) = 0`` starting at ``x0``.

    Returns the root and a trace holding every evaluated iterate together with
    ``|f|`` there. Raises :class:`DerivativeVanished` if ``df`` is zero at an
    iterate and :class:`MaxIterationsExceeded` (carrying the trace) if the
    residual test is not met within ``opts.max_iterations`` steps.
    """
    opts = opts or DEFAULT_OPTIONS
    threshold = opts.tolerance * scale
    iterates: list[float] = []
    norms: list[float] = []

    def trace(converged: bool) -> SolveTrace:
        return SolveTrace(tuple(iterates), tuple(norms), converged, len(iterates) - 1, threshold)

    x = float(x0)
    for step in range(opts.max_iterations + 1):
        fx = _evaluate(f, x, trace)
        if not math.isfinite(fx):
            raise Overflow(f"residual is not finite at x={x!r}", trace(False))
        iterates.append(x)
        norms.append(abs(fx))
        if abs(fx) <= threshold:
            return x, trace(True)
        if step == opts.max_iterations:
            break
        d = df(x)
        if d == 0.0:
            raise DerivativeVanished(f"derivative vanished at x={x!r}", trace(False))
        x = x - fx / d
    raise MaxIterationsExceeded(
        f"Newton did not converge in {opts.max_iterations} iterations "
        f"(last residual {norms[-1]:.3e})",
        trace(False),
    )


def bisection(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    opts: SolverOptions | None = None,
) -> float:
    """Bracketing root find; the slow, dependable reference for Newton results.

    Halves ``[lo, hi]`` until its width is at most
    ``tolerance * max(|lo|, |hi|, 1)`` and returns the midpoint.
    """
    opts = opts or DEFAULT_OPTIONS
    lo, hi = float(lo), float(hi)
    if lo > hi:
        lo, hi = hi, lo
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise NoSignChange(f"f({lo!r}) and f({hi!r}) have the same sign")
    while hi - lo > opts.tolerance * max(abs(lo), abs(hi), 1.0):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break  # bracket is down to adjacent doubles
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def newton_2d(
    F: Callable[[np.ndarray], np.ndarray],
    J: Callable[[np.ndarray], np.ndarray],
    x0,
    opts: SolverOptions | None = None,
    scale: float = 1.0,
) -> tuple[np.ndarray, SolveTrace]:
    """Full-step Newton for a system of two equations in two unknowns.

    Convergence uses the max-norm of the residual.
    """
    opts = opts or DEFAULT_OPTIONS
    threshold = opts.tolerance * scale
    iterates: list[tuple[float, float]] = []
    norms: list[float] = []

    def trace(converged: bool) -> SolveTrace:
        return SolveTrace(tuple(iterates), tuple(norms), converged, len(iterates) - 1, threshold)

    x = np.asarray(x0, dtype=float).copy()
    for step in range(opts.max_iterations + 1):
        fx = np.asarray(_evaluate(F, x, trace), dtype=float)
        norm = float(np.max(np.abs(fx)))
        if not math.isfinite(norm):
            raise Overflow(f"residual is not finite at {x.tolist()!r}", trace(False))
        iterates.append((float(x[0]), float(x[1])))
        norms.append(norm)
        if norm <= threshold:
            return x, trace(True)
        if step == opts.max_iterations:
            break
        jac = np.asarray(J(x), dtype=float)
        det = jac[0, 0] * jac[1, 1] - jac[0, 1] * jac[1, 0]
        if det == 0.0 or not math.isfinite(det):
            raise SingularJacobian(f"Jacobian is singular at {x.tolist()!r}", trace(False))
        # Cramer's rule: exact enough for 2x2 and avoids LAPACK overhead per step
        dx0 = (fx[0] * jac[1, 1] - fx[1] * jac[0, 1]) / det
        dx1 = (jac[0, 0] * fx[1] - jac[1, 0] * fx[0]) / det
        x = x - np.array([dx0, dx1])
    raise MaxIterationsExceeded(
        f"2-D Newton did not converge in {opts.max_iterations} iterations "
        f"(last residual {norms[-1]:.3e})",
        trace(False),
    )
