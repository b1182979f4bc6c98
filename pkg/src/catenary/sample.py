"""Curve sampling and summary figures for solved shapes.

Both shape families are sampled on a uniform grid of rest arc length, so one
code path serves inelastic and elastic cables. Results are reported in the
caller's frame: a mirrored span is reflected back and its arc length counted
from the caller's left anchor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.integrate import quad

from . import elastic, inelastic
from .model import CableSpec, ElasticShape, InelasticShape

Shape = Union[InelasticShape, ElasticShape]


@dataclass(frozen=True)
class CurveSample:
    s: np.ndarray
    x: np.ndarray
    y: np.ndarray
    tension: np.ndarray
    shape_kind: str  # "inelastic" or "elastic"
    meta: dict

    @property
    def points(self) -> list[tuple[float, float, float, float]]:
        return [tuple(map(float, row)) for row in zip(self.s, self.x, self.y, self.tension)]

    def __len__(self) -> int:
        return len(self.s)


@dataclass(frozen=True)
class Summary:
    lam: float
    gamma: float
    x_min: float
    y_min: float
    s_min: float
    t_min: float
    t_max: float
    sag: float
    stretched_length: float

    def line(self) -> str:
        return (f"lambda={self.lam!r} gamma={self.gamma!r} x_min={self.x_min!r} "
                f"y_min={self.y_min!r} sag={self.sag!r} t_min={self.t_min!r} t_max={self.t_max!r}")


def _kind(shape: Shape) -> str:
    return "inelastic" if isinstance(shape, InelasticShape) else "elastic"


def _canonical_point(shape: Shape, s: float) -> tuple[float, float]:
    if isinstance(shape, InelasticShape):
        return inelastic.point_at_arclength(shape, s)
    return elastic.point_at(shape, s)


def _canonical_tension(shape: Shape, spec: CableSpec, s: float) -> float:
    # rho*g*sqrt(lam^2 + (s - s_min)^2) is the tension of either family; for
    # gamma > 0 go through the spring law so the two stay in step
    if isinstance(shape, ElasticShape) and shape.gamma > 0:
        return elastic.tension_at(shape, spec, s)
    return spec.rho * spec.gravity * math.hypot(shape.lam, s - shape.s_min)


def _meta(shape: Shape, length: float) -> dict:
    span = shape.span
    return {
        "lambda": shape.lam,
        "gamma": shape.gamma,
        "x_min": float(span.to_world_x(shape.x_min)),
        "y_min": shape.y_min,
        "s_min": length - shape.s_min if span.mirrored else shape.s_min,
    }


def sample_curve(shape: Shape, spec: CableSpec, n_points: int) -> CurveSample:
    """``n_points`` samples at ``s = i*L/(n_points - 1)``, in the caller's frame.

    The end samples are set to the anchors exactly; the evaluated curve meets
    them only to solver tolerance.
    """
    if n_points < 2:
        raise ValueError("need at least 2 sample points")
    L = shape.length
    s = np.linspace(0.0, L, n_points)
    pts = np.array([_canonical_point(shape, si) for si in s])
    tension = np.array([_canonical_tension(shape, spec, si) for si in s])
    span = shape.span
    pts[0] = (span.a, span.h)
    pts[-1] = (span.b, span.k)
    x, y = pts[:, 0], pts[:, 1]
    if span.mirrored:
        s = (L - s)[::-1]
        x = span.to_world_x(x)[::-1]
        y = y[::-1]
        tension = tension[::-1]
    return CurveSample(s, np.asarray(x, dtype=float), y.copy(), tension.copy(), _kind(shape), _meta(shape, L))


def stretched_length(shape: Shape) -> float:
    """Length of the loaded cable: ``L`` if inelastic, else the integral of ``R`` over ``[0, L]``."""
    L = shape.length
    if shape.gamma == 0.0:
        return L
    c = shape.gamma / L
    mu = shape.mu()
    extra, _ = quad(lambda s: math.hypot(mu, c * (s - shape.s_min)), 0.0, L,
                    points=[shape.s_min] if 0.0 < shape.s_min < L else None,
                    epsabs=1e-10 * L, epsrel=0.0)
    return L + extra


def summarize(shape: Shape, spec: CableSpec) -> Summary:
    span = shape.span
    L = shape.length
    meta = _meta(shape, L)
    t_end = max(_canonical_tension(shape, spec, 0.0), _canonical_tension(shape, spec, L))
    lowest = shape.y_min if 0.0 <= shape.s_min <= L else span.h
    return Summary(
        lam=shape.lam,
        gamma=shape.gamma,
        x_min=meta["x_min"],
        y_min=shape.y_min,
        s_min=meta["s_min"],
        t_min=spec.rho * spec.gravity * shape.lam,
        t_max=t_end,
        sag=max(0.0, span.k - lowest),
        stretched_length=stretched_length(shape),
    )
