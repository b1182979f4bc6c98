"""Elastic (linearly extensible) catenary, parametrized by rest arc length.

With rest arc length ``s``, lowest-point parameter ``s_min`` and shape
parameter ``lam``, a cable of rest length ``L`` and elasticity index ``gamma``
hangs as::

    x = x_min + lam*asinh(v) + gamma*lam*(s - s_min)/L
    y = y_min + lam*(sqrt(1 + v**2) - 1) + gamma*(s - s_min)**2/(2L)

where ``v = (s - s_min)/lam``. Matching the right anchor gives two coupled
equations for ``(lam, s_min)``; unlike the inelastic case they do not
decouple, so they are solved together by 2-D Newton in the unknowns
``(xi, s_min)`` with ``lam = (b - a)/(2 xi)``, warm-started from the inelastic
solution.
"""

from __future__ import annotations

import logging
import math
from typing import Iterable, NamedTuple

import numpy as np

from .errors import (
    InelasticShapeHasNoStretch,
    MaxIterationsExceeded,
    NotSagging,
    OutOfRange,
    SolverError,
)
from .inelastic import solve_general
from .model import AnchorSpan, CableSpec, ElasticShape, SolveTrace, feasible_length
from .rootfind import SolverOptions, newton_2d

log = logging.getLogger(__name__)


class ElasticResiduals(NamedTuple):
    f1: float  # horizontal span
    f2: float  # height difference


def residuals(xi: float, s_min: float, span: AnchorSpan, L: float, gamma: float) -> ElasticResiduals:
    """Right-anchor mismatch of the elastic parametrization, divided by ``lam``."""
    lam = span.width / (2.0 * xi)
    u1 = (L - s_min) / lam
    u0 = s_min / lam
    r1 = math.sqrt(1.0 + u1 * u1)
    r0 = math.sqrt(1.0 + u0 * u0)
    f1 = gamma + math.asinh(u1) + math.asinh(u0) - 2.0 * xi
    # gamma*(lam/L)*(u1^2 - u0^2)/2 + r1 - r0, regrouped to cancel exactly when s_min = L/2
    f2 = (L - 2.0 * s_min) / lam * (0.5 * gamma + (u1 + u0) / (r1 + r0)) - span.rise / lam
    return ElasticResiduals(f1, f2)


def jacobian(xi: float, s_min: float, span: AnchorSpan, L: float, gamma: float) -> np.ndarray:
    """Analytic partial derivatives of :func:`residuals` with respect to ``(xi, s_min)``."""
    D = span.width
    lam = D / (2.0 * xi)
    u1 = (L - s_min) / lam
    u0 = s_min / lam
    r1 = math.sqrt(1.0 + u1 * u1)
    r0 = math.sqrt(1.0 + u0 * u0)
    # du/dxi = u/xi = 2*(rest length)/D
    du1 = 2.0 * (L - s_min) / D
    du0 = 2.0 * s_min / D
    j11 = du1 / r1 + du0 / r0 - 2.0
    j12 = (1.0 / r0 - 1.0 / r1) / lam
    j21 = gamma * (L - 2.0 * s_min) / D + u1 * du1 / r1 - u0 * du0 / r0 - 2.0 * span.rise / D
    j22 = -2.0 * gamma * xi / D - (u1 / r1 + u0 / r0) / lam
    return np.array([[j11, j12], [j21, j22]])


def recover_offsets(lam: float, gamma: float, s_min: float, span: AnchorSpan,
                    L: float) -> tuple[float, float]:
    """Lowest point ``(x_min, y_min)`` from the left-anchor conditions ``x(0)=a, y(0)=h``."""
    v = s_min / lam
    x_min = span.a + lam * math.asinh(v) + gamma * lam * s_min / L
    y_min = span.h - lam * v * v / (math.sqrt(1.0 + v * v) + 1.0) - gamma * s_min * s_min / (2.0 * L)
    return x_min, y_min


def make_shape(xi: float, s_min: float, gamma: float, span: AnchorSpan, L: float) -> ElasticShape:
    lam = span.width / (2.0 * xi)
    x_min, y_min = recover_offsets(lam, gamma, s_min, span, L)
    return ElasticShape(lam, float(gamma), float(s_min), x_min, y_min, float(L), span)


def solve_parameters(span: AnchorSpan, L: float, gamma: float, start,
                     opts: SolverOptions | None = None) -> tuple[float, float, SolveTrace]:
    """2-D Newton for ``(xi, s_min)`` from ``start``; no continuation."""
    root, trace = newton_2d(
        lambda p: residuals(p[0], p[1], span, L, gamma),
        lambda p: jacobian(p[0], p[1], span, L, gamma),
        start,
        opts,
    )
    xi, s_min = float(root[0]), float(root[1])
    if not xi > 0:
        raise SolverError(f"Newton converged to a non-physical root xi={xi!r}", trace)
    if s_min > 0.5 * L * (1.0 + 1e-12):
        log.warning("solution has s_min=%r beyond L/2=%r; uniqueness is unproven here",
                    s_min, 0.5 * L)
    return xi, s_min, trace


def inelastic_start(span: AnchorSpan, L: float, opts: SolverOptions | None = None) -> tuple[float, float]:
    shape = solve_general(span, L, opts)
    return span.width / (2.0 * shape.lam), shape.s_min


# Smallest gamma increment tried before continuation gives up.
_MIN_CONTINUATION_STEP = 1e-9


def continue_gamma(span: AnchorSpan, L: float, gamma_from: float, gamma_to: float, start,
                   max_step: float, opts: SolverOptions | None = None) -> tuple[float, float, SolveTrace]:
    """Walk gamma from ``gamma_from`` to ``gamma_to``, warm-starting each solve.

    Steps never exceed ``max_step``; a stage that fails to converge is
    retried from the last good point with half the step. The returned trace
    concatenates every converged stage.
    """
    if not max_step > 0:
        raise ValueError("continuation step must be positive")
    iterates: list = []
    norms: list = []
    steps = 0
    tolerance = 0.0
    g = gamma_from
    step = max_step
    current = (float(start[0]), float(start[1]))
    while g < gamma_to:
        target = min(gamma_to, g + step)
        try:
            xi, s_min, trace = solve_parameters(span, L, target, current, opts)
        except (SolverError, ZeroDivisionError) as exc:
            step *= 0.5
            if step < _MIN_CONTINUATION_STEP:
                raise MaxIterationsExceeded(
                    f"continuation stalled at gamma={g!r}", getattr(exc, "trace", None)) from exc
            continue
        current = (xi, s_min)
        g = target
        iterates.extend(trace.iterates)
        norms.extend(trace.residual_norms)
        steps += trace.iterations
        tolerance = trace.tolerance
        step = min(max_step, 2.0 * step)
    combined = SolveTrace(tuple(iterates), tuple(norms), True, steps, tolerance)
    return current[0], current[1], combined


def solve(span: AnchorSpan, spec: CableSpec, opts: SolverOptions | None = None,
          continuation: float | None = None) -> tuple[ElasticShape, SolveTrace]:
    """Equilibrium of an elastic cable between two anchors.

    Newton starts from the inelastic solution. With ``continuation`` set,
    gamma is raised from 0 to its target in steps of at most that size (see
    :func:`continue_gamma`). Without it, :class:`MaxIterationsExceeded`
    carries the trace so callers can retry with continuation.
    """
    L = spec.length
    if not feasible_length(span, L):
        raise NotSagging(L, span.chord())
    gamma = spec.gamma()
    start = inelastic_start(span, L, opts)
    if continuation is None or gamma == 0.0:
        xi, s_min, trace = solve_parameters(span, L, gamma, start, opts)
    else:
        xi, s_min, trace = continue_gamma(span, L, 0.0, gamma, start, continuation, opts)
    return make_shape(xi, s_min, gamma, span, L), trace


def sweep(span: AnchorSpan, L: float, gammas: Iterable[float],
          opts: SolverOptions | None = None,
          fallback_step: float = 0.1) -> list[tuple[ElasticShape, SolveTrace]]:
    """Solve for each gamma in order, warm-starting from the previous solution.

    If a direct warm-started solve fails, the gap from the previous gamma is
    bridged by :func:`continue_gamma` with steps of ``fallback_step``.
    """
    start = inelastic_start(span, L, opts)
    prev = 0.0
    results = []
    for g in gammas:
        try:
            xi, s_min, trace = solve_parameters(span, L, g, start, opts)
        except (SolverError, ZeroDivisionError):
            if g <= prev:
                raise
            log.info("gamma=%r failed from warm start; retrying with continuation", g)
            xi, s_min, trace = continue_gamma(span, L, prev, g, start, fallback_step, opts)
        start, prev = (xi, s_min), g
        results.append((make_shape(xi, s_min, g, span, L), trace))
    return results


def _check_range(shape: ElasticShape, s: float) -> None:
    L = shape.rest_length
    slack = 1e-12 * L
    if not (-slack <= s <= L + slack):
        raise OutOfRange(f"rest arc length {s!r} outside [0, {L!r}]")


def point_at(shape: ElasticShape, s: float) -> tuple[float, float]:
    """Position of the material point at rest arc length ``s``."""
    _check_range(shape, s)
    lam, L, gamma = shape.lam, shape.rest_length, shape.gamma
    d = s - shape.s_min
    v = d / lam
    x = shape.x_min + lam * math.asinh(v) + gamma * lam * d / L
    y = shape.y_min + lam * v * v / (math.sqrt(1.0 + v * v) + 1.0) + gamma * d * d / (2.0 * L)
    return x, y


def stretch_factor(shape: ElasticShape, s: float) -> float:
    """Local ratio of stretched to rest length, ``1 + sqrt(mu**2 + (gamma/L)**2 (s-s_min)**2)``."""
    if shape.gamma == 0.0:
        raise InelasticShapeHasNoStretch("stretch is undefined for gamma = 0")
    _check_range(shape, s)
    c = shape.gamma / shape.rest_length
    return 1.0 + math.hypot(shape.mu(), c * (s - shape.s_min))


def tension_at(shape: ElasticShape, spec: CableSpec, s: float) -> float:
    """Spring-law tension ``(R - 1)/q`` at rest arc length ``s``.

    ``q`` is taken from the shape's own gamma and the spec's weight, so the
    minimum equals ``rho*g*lam`` regardless of rounding in the spec's ``q``.
    """
    if shape.gamma == 0.0:
        raise InelasticShapeHasNoStretch("use the inelastic tension for gamma = 0")
    q = shape.gamma / (spec.rho * shape.rest_length * spec.gravity)
    return (stretch_factor(shape, s) - 1.0) / q
