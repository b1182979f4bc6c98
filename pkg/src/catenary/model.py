"""Domain types shared by the solvers.

The library is unit-agnostic: every quantity is assumed to be expressed in one
consistent system (SI is a sensible default, with ``gravity = 9.81``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .errors import DegenerateSpan


@dataclass(frozen=True)
class AnchorSpan:
    """Two attachment points ``(a, h)`` and ``(b, k)`` in canonical orientation.

    Canonical means ``a < b`` and ``h <= k``. A span whose left anchor was the
    higher one is stored reflected through ``x -> a + b - x`` with
    ``mirrored=True``; use :meth:`to_world_x` to map abscissae back. Build
    instances from raw coordinates with :func:`make_span`.
    """

    a: float
    b: float
    h: float
    k: float
    mirrored: bool = False

    def __post_init__(self):
        for name in ("a", "b", "h", "k"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"anchor coordinate {name} must be finite")
        if self.a == self.b:
            raise DegenerateSpan("anchors share an x-coordinate; vertical spans are not supported")
        if self.a > self.b:
            raise ValueError("canonical span needs a < b; use make_span for raw input")
        if self.h > self.k:
            raise ValueError("canonical span needs h <= k; use make_span for raw input")

    @property
    def width(self) -> float:
        return self.b - self.a

    @property
    def rise(self) -> float:
        return self.k - self.h

    @property
    def level(self) -> bool:
        return self.h == self.k

    def chord(self) -> float:
        return math.hypot(self.b - self.a, self.k - self.h)

    def to_world_x(self, x):
        """Map a canonical abscissa (scalar or array) back to the caller's frame."""
        if self.mirrored:
            return self.a + self.b - x
        return x

    def world_anchors(self) -> tuple[tuple[float, float], tuple[float, float]]:
        """Left and right anchors as originally supplied (left has the smaller x)."""
        if self.mirrored:
            return (self.a, self.k), (self.b, self.h)
        return (self.a, self.h), (self.b, self.k)


def make_span(a: float, b: float, h: float, k: float) -> AnchorSpan:
    """Build a canonical :class:`AnchorSpan` from raw anchor coordinates.

    Anchors given right-to-left (``a > b``) are relabelled; they describe the
    same physical problem. If the left anchor is then the higher one, the span
    is mirrored so that ``h <= k`` holds.
    """
    a, b, h, k = float(a), float(b), float(h), float(k)
    if a == b:
        raise DegenerateSpan("anchors share an x-coordinate; vertical spans are not supported")
    if a > b:
        a, b, h, k = b, a, k, h
    if h > k:
        return AnchorSpan(a, b, k, h, mirrored=True)
    return AnchorSpan(a, b, h, k)


def feasible_length(span: AnchorSpan, length: float) -> bool:
    """True iff a cable of this length sags between the anchors."""
    return length > span.chord()


@dataclass(frozen=True)
class CableSpec:
    """Unstretched length, weight and elasticity of a uniform cable.

    ``compliance_density`` is the compliance per unit rest length (a reciprocal
    force); zero means the cable is inelastic. ``elasticity_index`` is set by
    :meth:`from_gamma` so that ``gamma()`` returns the requested value exactly
    instead of after a round trip through ``q``.
    """

    length: float
    rho: float = 1.0
    gravity: float = 9.81
    compliance_density: float = 0.0
    elasticity_index: float | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if not (self.length > 0 and math.isfinite(self.length)):
            raise ValueError("cable length must be positive and finite")
        if not (self.rho > 0 and math.isfinite(self.rho)):
            raise ValueError("linear mass density must be positive and finite")
        if not (self.gravity > 0 and math.isfinite(self.gravity)):
            raise ValueError("gravity must be positive and finite")
        if not (self.compliance_density >= 0 and math.isfinite(self.compliance_density)):
            raise ValueError("compliance density must be non-negative and finite")
        if self.elasticity_index is not None:
            derived = self.compliance_density * self.weight
            if not math.isclose(self.elasticity_index, derived, rel_tol=1e-12, abs_tol=0.0):
                raise ValueError("elasticity index disagrees with the compliance density")

    @classmethod
    def from_gamma(cls, length: float, gamma: float, rho: float = 1.0,
                   gravity: float = 9.81) -> "CableSpec":
        """Spec whose compliance density yields the requested elasticity index."""
        if gamma < 0:
            raise ValueError("gamma must be non-negative")
        return cls(length, rho, gravity, gamma / (rho * length * gravity), float(gamma))

    @property
    def weight(self) -> float:
        return self.rho * self.length * self.gravity

    def gamma(self) -> float:
        """Dimensionless elasticity index q * rho * L * g."""
        if self.elasticity_index is not None:
            return self.elasticity_index
        return self.compliance_density * self.rho * self.length * self.gravity


@dataclass(frozen=True)
class InelasticShape:
    """Hyperbolic-cosine catenary ``y = y_min + lam * (cosh((x - x_min)/lam) - 1)``.

    Coordinates live in the canonical frame of ``span``. ``s_min`` is the arc
    length from the left anchor to the lowest point of the curve; it is
    negative when that point lies left of the span.
    """

    lam: float
    x_min: float
    y_min: float
    s_min: float
    span: AnchorSpan
    length: float

    @property
    def gamma(self) -> float:
        return 0.0


@dataclass(frozen=True)
class ElasticShape:
    """Elastic catenary parametrized by rest arc length ``s`` in ``[0, rest_length]``."""

    lam: float
    gamma: float
    s_min: float
    x_min: float
    y_min: float
    rest_length: float
    span: AnchorSpan

    @property
    def length(self) -> float:
        return self.rest_length

    def mu(self) -> float:
        """Horizontal-balance constant gamma * lam / L."""
        return self.gamma * self.lam / self.rest_length


@dataclass(frozen=True)
class SolveTrace:
    """Iteration log of a root find: one entry per evaluated iterate."""

    iterates: tuple = ()
    residual_norms: tuple[float, ...] = ()
    converged: bool = False
    iterations: int = 0
    tolerance: float = field(default=0.0, compare=False)

    def tail(self, n: int = 3) -> Sequence[float]:
        return self.residual_norms[-n:]

    @property
    def final_residual(self) -> float:
        return self.residual_norms[-1] if self.residual_norms else math.inf
