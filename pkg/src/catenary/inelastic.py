"""Inelastic catenary: solving for the shape parameter and the lowest point.

A uniform inextensible cable hangs as

    y(x) = y_min + lam * (cosh((x - x_min) / lam) - 1)

The shape parameter ``lam`` comes from a scalar equation in
``xi = (b - a) / (2 lam)``::

    sinh(xi) = r * xi,    r = sqrt(L**2 - (k - h)**2) / (b - a)

which has one positive root whenever the cable sags (r > 1). With ``lam``
known, the abscissa of the lowest point is the unique root of a strictly
decreasing function ``g`` (see :func:`residual_g`). Both roots are found by
plain Newton from starting points that are provably on the convex side.

All shapes and abscissae here live in the canonical frame of the span
(``h <= k``); :meth:`AnchorSpan.to_world_x` maps back.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import HeightMismatch, NotSagging, OutOfRange
from .model import AnchorSpan, CableSpec, InelasticShape, SolveTrace, feasible_length
from .rootfind import SolverOptions, check_hyperbolic_arg, newton_scalar

# Above this ratio the sqrt(6 r) start needs too many unit-sized Newton steps.
_LOG_GUESS_RATIO = 500.0


@dataclass(frozen=True)
class XiProblem:
    """``sinh(xi) = ratio * xi`` with ``ratio = L_eff / (b - a)``."""

    ratio: float
    half_span: float

    def __post_init__(self):
        if not self.half_span > 0:
            raise ValueError("half_span must be positive")

    @classmethod
    def for_span(cls, span: AnchorSpan, length: float) -> "XiProblem":
        if span.level:
            effective = length
        else:
            d = span.rise
            effective = math.sqrt((length - d) * (length + d)) if length > d else 0.0
        return cls(effective / span.width, 0.5 * span.width)


def _sinh_minus_identity(xi: float) -> float:
    """``sinh(xi) - xi`` without cancellation for small ``xi``."""
    if abs(xi) >= 1.0:
        return math.sinh(check_hyperbolic_arg(xi)) - xi
    x2 = xi * xi
    term = xi * x2 / 6.0
    total = term
    n = 3
    while abs(term) > 1e-17 * abs(total):
        term *= x2 / ((n + 1) * (n + 2))
        total += term
        n += 2
    return total


def xi_equation(ratio: float):
    """Residual ``sinh(xi) - ratio*xi`` and its derivative, as two callables.

    Both are evaluated as small differences, ``(sinh(xi) - xi) - (ratio-1)*xi``
    and ``2 sinh(xi/2)**2 - (ratio-1)``, so near-taut cables keep full accuracy.
    """
    excess = ratio - 1.0

    def f(xi: float) -> float:
        return _sinh_minus_identity(xi) - excess * xi

    def df(xi: float) -> float:
        s = math.sinh(0.5 * check_hyperbolic_arg(xi))
        return 2.0 * s * s - excess

    return f, df


def xi_initial_guess(ratio: float) -> float:
    """Starting point strictly right of the positive root of the xi equation.

    ``sqrt(6 r)`` bounds the root because ``sinh(xi) > xi**3 / 6``. For very
    slack cables it sits far to the right and Newton walks back roughly one
    unit per step, so past ``r = 500`` we use ``log(2r) + log(log(2r)) + 1``.
    With ``l = log(2r)`` that point gives ``sinh(xi) > e*l*r``, which exceeds
    ``r*xi = r*(l + log(l) + 1)`` for every ``l >= 1``.
    """
    if ratio <= _LOG_GUESS_RATIO:
        return math.sqrt(6.0 * ratio)
    l2r = math.log(2.0 * ratio)
    return l2r + math.log(l2r) + 1.0


def solve_xi(p: XiProblem, opts: SolverOptions | None = None) -> tuple[float, SolveTrace]:
    """Positive root of ``sinh(xi) = p.ratio * xi``.

    Newton from :func:`xi_initial_guess` decreases monotonically onto the
    root because the residual is convex and increasing there. The residual
    test is scaled by ``ratio - 1``: the slope at the root shrinks with it, so
    a fixed scale would leave nearly taut cables inaccurate. For very slack
    cables the rounding floor of ``sinh`` grows like ``xi**2``, which the
    ``log(ratio)`` factor absorbs.
    """
    if not p.ratio > 1.0:
        raise NotSagging(p.ratio * 2 * p.half_span, 2 * p.half_span)
    f, df = xi_equation(p.ratio)
    scale = (p.ratio - 1.0) * max(1.0, (math.log(p.ratio) / 10.0) ** 2)
    return newton_scalar(f, df, xi_initial_guess(p.ratio), opts, scale=scale)


def _cosh_minus_one(u: float) -> float:
    # 2 sinh^2(u/2) avoids cancellation near u = 0
    s = math.sinh(0.5 * check_hyperbolic_arg(u))
    return 2.0 * s * s


def solve_equal_heights(span: AnchorSpan, length: float,
                        opts: SolverOptions | None = None) -> InelasticShape:
    if not span.level:
        raise HeightMismatch(f"anchor heights differ ({span.h!r} vs {span.k!r})")
    if not feasible_length(span, length):
        raise NotSagging(length, span.chord())
    xi, _ = solve_xi(XiProblem.for_span(span, length), opts)
    lam = span.width / (2.0 * xi)
    x_min = 0.5 * (span.a + span.b)
    y_min = span.h - lam * _cosh_minus_one(xi)
    s_min = lam * math.sinh(xi)
    return InelasticShape(lam, x_min, y_min, s_min, span, float(length))


def residual_g(x: float, lam: float, span: AnchorSpan) -> float:
    """``cosh((b-x)/lam) - cosh((a-x)/lam) - (k-h)/lam``; zero at the lowest point."""
    u_b = check_hyperbolic_arg((span.b - x) / lam)
    u_a = check_hyperbolic_arg((span.a - x) / lam)
    return math.cosh(u_b) - math.cosh(u_a) - span.rise / lam


def residual_g_prime(x: float, lam: float, span: AnchorSpan) -> float:
    u_b = check_hyperbolic_arg((span.b - x) / lam)
    u_a = check_hyperbolic_arg((span.a - x) / lam)
    return (math.sinh(u_a) - math.sinh(u_b)) / lam


def solve_x_min(lam: float, span: AnchorSpan,
                opts: SolverOptions | None = None) -> tuple[float, SolveTrace]:
    """Root of :func:`residual_g` by Newton from the midpoint of the span.

    ``g`` is strictly decreasing, non-positive at the midpoint and convex to
    its left. The first step therefore lands at or left of the root, and every
    later iterate increases monotonically onto it.
    """
    mid = 0.5 * (span.a + span.b)
    xi = span.width / (2.0 * lam)
    scale = max(math.cosh(check_hyperbolic_arg(xi)), span.rise / lam)
    return newton_scalar(
        lambda x: residual_g(x, lam, span),
        lambda x: residual_g_prime(x, lam, span),
        mid,
        opts,
        scale=scale,
    )


def solve_general(span: AnchorSpan, length: float,
                  opts: SolverOptions | None = None) -> InelasticShape:
    """Inelastic catenary through two anchors at arbitrary heights.

    Squaring and subtracting the height-difference and length equations
    eliminates ``x_min`` and leaves the equal-height xi equation with ``L``
    replaced by ``sqrt(L**2 - (k-h)**2)``. Level spans go straight to
    :func:`solve_equal_heights`.
    """
    if not feasible_length(span, length):
        raise NotSagging(length, span.chord())
    if span.level:
        return solve_equal_heights(span, length, opts)
    xi, _ = solve_xi(XiProblem.for_span(span, length), opts)
    lam = span.width / (2.0 * xi)
    x_min, _ = solve_x_min(lam, span, opts)
    y_min = span.k - lam * _cosh_minus_one((span.b - x_min) / lam)
    s_min = lam * math.sinh(check_hyperbolic_arg((x_min - span.a) / lam))
    return InelasticShape(lam, x_min, y_min, s_min, span, float(length))


def coupled_residuals(shape: InelasticShape) -> tuple[float, float]:
    """Residuals of the original (not decoupled) pair of equations, as lengths.

    Returns ``lam*(cosh(ub) - cosh(ua)) - (k-h)`` and
    ``lam*(sinh(ub) - sinh(ua)) - L`` with ``u = (anchor - x_min)/lam``.
    """
    span, lam = shape.span, shape.lam
    ub = (span.b - shape.x_min) / lam
    ua = (span.a - shape.x_min) / lam
    height = lam * (math.cosh(ub) - math.cosh(ua)) - span.rise
    length = lam * (math.sinh(ub) - math.sinh(ua)) - shape.length
    return height, length


def eval_y(shape: InelasticShape, x):
    """Height of the curve at abscissa ``x`` (scalar or numpy array)."""
    u = (np.asarray(x, dtype=float) - shape.x_min) / (2.0 * shape.lam)
    y = shape.y_min + 2.0 * shape.lam * np.sinh(u) ** 2
    return float(y) if np.ndim(y) == 0 else y


def arclength_at(shape: InelasticShape, x: float) -> float:
    """Arc length from the left anchor to abscissa ``x``."""
    lam = shape.lam
    return lam * math.sinh(check_hyperbolic_arg((x - shape.x_min) / lam)) + shape.s_min


def point_at_arclength(shape: InelasticShape, s: float) -> tuple[float, float]:
    """Point at arc length ``s`` from the left anchor, ``0 <= s <= L``."""
    L = shape.length
    slack = 1e-12 * L
    if not (-slack <= s <= L + slack):
        raise OutOfRange(f"arc length {s!r} outside [0, {L!r}]")
    lam = shape.lam
    v = (s - shape.s_min) / lam
    x = shape.x_min + lam * math.asinh(v)
    # sqrt(1+v^2) - 1 without cancellation
    y = shape.y_min + lam * v * v / (math.sqrt(1.0 + v * v) + 1.0)
    return x, y


def tension_at(shape: InelasticShape, spec: CableSpec, x: float) -> float:
    """Cable tension at abscissa ``x``; its minimum ``rho*g*lam`` is at ``x_min``."""
    u = check_hyperbolic_arg((x - shape.x_min) / shape.lam)
    return spec.rho * spec.gravity * shape.lam * math.cosh(u)
