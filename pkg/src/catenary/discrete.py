"""Mass points joined by linear springs: a discrete oracle for the elastic cable.

A cable of rest length ``L`` is cut into ``N`` springs of rest length
``h = L/N`` and compliance ``q*h``. Interior nodes carry mass ``rho*h``, the two
pinned end nodes ``rho*h/2``. The equilibrium is a stationary point of

    E = sum_i m_i g y_i + sum_i (l_i - h)**2 / (2 q h)

whose gradient with respect to the free (interior) coordinates is exactly
minus the per-node force balance. It is found by damped Newton with ``E`` as
the merit function.

Nothing here depends on the closed-form continuum solution except the optional
warm start, so agreement with :mod:`catenary.elastic` is an independent check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgError, cho_solve_banded, cholesky_banded

from .elastic import point_at, tension_at
from .errors import InelasticNotSupported, MaxIterationsExceeded, TooFewSegments, ZeroLengthSegment
from .model import AnchorSpan, CableSpec, ElasticShape, SolveTrace
from .rootfind import SolverOptions

_EPS = np.finfo(float).eps

CHAIN_OPTIONS = SolverOptions(tolerance=1e-10, max_iterations=200)


def rounding_floor(chain: DiscreteChain, coords: np.ndarray) -> float:
    """Smallest force residual resolvable in double precision.

    Segment vectors are differences of absolute coordinates, so each spring
    force carries an error near ``eps*|coord|/(q*h)``. Relative to the node
    weight this grows like ``N**2/gamma``.
    """
    return 16.0 * _EPS * float(np.max(np.abs(coords))) / chain.segment_compliance


@dataclass(frozen=True)
class DiscreteChain:
    n_springs: int
    rest_segment: float
    node_masses: np.ndarray
    segment_compliance: float
    span: AnchorSpan
    gravity: float
    rho: float
    compliance_density: float

    @property
    def length(self) -> float:
        return self.n_springs * self.rest_segment

    @property
    def total_mass(self) -> float:
        return float(np.sum(self.node_masses))

    @property
    def total_compliance(self) -> float:
        return self.n_springs * self.segment_compliance

    @property
    def node_weight(self) -> float:
        """Weight of one interior node, ``rho*g*L/N``; the force scale for convergence."""
        return self.rho * self.gravity * self.rest_segment


@dataclass(frozen=True)
class NodePositions:
    coordinates: np.ndarray  # shape (N+1, 2)

    @property
    def x(self) -> np.ndarray:
        return self.coordinates[:, 0]

    @property
    def y(self) -> np.ndarray:
        return self.coordinates[:, 1]


def build_chain(span: AnchorSpan, spec: CableSpec, n: int) -> DiscreteChain:
    if n < 2:
        raise TooFewSegments(f"need at least 2 springs, got {n}")
    if spec.compliance_density <= 0:
        raise InelasticNotSupported("the spring chain needs a positive compliance density")
    h = spec.length / n
    masses = np.full(n + 1, spec.rho * h)
    masses[0] = masses[-1] = 0.5 * spec.rho * h
    return DiscreteChain(n, h, masses, spec.compliance_density * h, span,
                         spec.gravity, spec.rho, spec.compliance_density)


def make_positions(chain: DiscreteChain, coordinates) -> NodePositions:
    """Validate a node array: ``N+1`` rows, ends on the anchors."""
    coords = np.array(coordinates, dtype=float)
    if coords.shape != (chain.n_springs + 1, 2):
        raise ValueError(f"expected shape {(chain.n_springs + 1, 2)}, got {coords.shape}")
    span = chain.span
    coords[0] = (span.a, span.h)
    coords[-1] = (span.b, span.k)
    return NodePositions(coords)


def chord_positions(chain: DiscreteChain) -> NodePositions:
    """Nodes evenly spaced on the straight line between the anchors."""
    t = np.linspace(0.0, 1.0, chain.n_springs + 1)
    span = chain.span
    return make_positions(chain, np.column_stack([span.a + t * span.width, span.h + t * span.rise]))


def continuum_positions(chain: DiscreteChain, shape: ElasticShape) -> NodePositions:
    """Nodes placed on the continuum curve at their rest arc lengths."""
    s = np.linspace(0.0, chain.length, chain.n_springs + 1)
    s[-1] = min(s[-1], shape.rest_length)
    return make_positions(chain, [point_at(shape, si) for si in s])


def _segments(coords: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    d = np.diff(coords, axis=0)
    lengths = np.hypot(d[:, 0], d[:, 1])
    if np.any(lengths == 0.0):
        raise ZeroLengthSegment("two neighbouring nodes coincide")
    return d, lengths


def spring_tensions(chain: DiscreteChain, pos: NodePositions) -> np.ndarray:
    """Spring forces ``(l_i - h)/(q h)``, positive in tension."""
    _, lengths = _segments(pos.coordinates)
    return (lengths - chain.rest_segment) / chain.segment_compliance


def force_residuals(chain: DiscreteChain, pos: NodePositions) -> np.ndarray:
    """Net (horizontal, vertical) force on each interior node, shape ``(N-1, 2)``."""
    d, lengths = _segments(pos.coordinates)
    tension = (lengths - chain.rest_segment) / chain.segment_compliance
    pull = tension[:, None] * d / lengths[:, None]  # spring i pulls node i back toward node i-1
    net = pull[1:] - pull[:-1]
    net[:, 1] -= chain.node_masses[1:-1] * chain.gravity
    return net


def total_energy(chain: DiscreteChain, pos: NodePositions) -> float:
    _, lengths = _segments(pos.coordinates)
    gravitational = float(np.dot(chain.node_masses, pos.y)) * chain.gravity
    stretch = lengths - chain.rest_segment
    elastic = float(np.dot(stretch, stretch)) / (2.0 * chain.segment_compliance)
    return gravitational + elastic


def _hessian_banded(chain: DiscreteChain, coords: np.ndarray) -> np.ndarray:
    """Upper banded storage (bandwidth 3) of the energy Hessian in the free coordinates.

    Free unknowns are ordered ``x_1, y_1, ..., x_{N-1}, y_{N-1}``.
    """
    n_free = chain.n_springs - 1
    m = 2 * n_free
    d, lengths = _segments(coords)
    k = 1.0 / chain.segment_compliance
    ratio = chain.rest_segment / lengths
    unit = d / lengths[:, None]
    # per-spring 2x2 stiffness k*((1 - h/l) I + (h/l) n n^T)
    blocks = k * (
        (1.0 - ratio)[:, None, None] * np.eye(2)
        + ratio[:, None, None] * unit[:, :, None] * unit[:, None, :]
    )
    dense_diag = blocks[:-1] + blocks[1:]  # node j touches springs j and j+1
    ab = np.zeros((4, m))

    def put(i, j, value):
        ab[3 + i - j, j] += value

    for node in range(n_free):
        base = 2 * node
        blk = dense_diag[node]
        put(base, base, blk[0, 0])
        put(base, base + 1, blk[0, 1])
        put(base + 1, base + 1, blk[1, 1])
        if node + 1 < n_free:
            off = -blocks[node + 1]  # spring between free nodes node and node+1
            nxt = base + 2
            put(base, nxt, off[0, 0])
            put(base, nxt + 1, off[0, 1])
            put(base + 1, nxt, off[1, 0])
            put(base + 1, nxt + 1, off[1, 1])
    return ab


def _with_free(template: np.ndarray, free: np.ndarray) -> np.ndarray:
    coords = template.copy()
    coords[1:-1] = free.reshape(-1, 2)
    return coords


def _newton_direction(ab: np.ndarray, grad: np.ndarray) -> np.ndarray:
    """Solve ``(H + tau I) p = -grad``, raising ``tau`` until the matrix is positive definite."""
    diag_scale = float(np.max(np.abs(ab[3])))
    tau = 0.0
    while True:
        shifted = ab.copy()
        shifted[3] += tau
        try:
            factor = cholesky_banded(shifted, lower=False)
            return -cho_solve_banded((factor, False), grad)
        except LinAlgError:
            tau = max(2.0 * tau, 1e-8 * diag_scale)
            if tau > 1e8 * diag_scale:
                return -grad / diag_scale


def solve_equilibrium(chain: DiscreteChain, init: NodePositions | None = None,
                      opts: SolverOptions | None = None) -> tuple[NodePositions, SolveTrace]:
    """Static equilibrium of the chain.

    Converged when every interior force component is at most
    ``opts.tolerance * rho*g*L/N`` (default :data:`CHAIN_OPTIONS`), or the
    :func:`rounding_floor` if that is larger. Each step is a (shifted) Newton step with
    backtracking on the energy; a plain gradient step is used when the
    Newton direction fails to reduce it.
    """
    opts = opts or CHAIN_OPTIONS
    pos = init if init is not None else chord_positions(chain)
    coords = make_positions(chain, pos.coordinates).coordinates
    threshold = max(opts.tolerance * chain.node_weight, rounding_floor(chain, coords))
    free = coords[1:-1].ravel().copy()

    def state(z):
        p = NodePositions(_with_free(coords, z))
        return p, total_energy(chain, p), -force_residuals(chain, p).ravel()

    current, energy, grad = state(free)
    iterates: list = []
    norms: list[float] = []
    for step in range(opts.max_iterations + 1):
        norm = float(np.max(np.abs(grad)))
        iterates.append(current.coordinates)
        norms.append(norm)
        if norm <= threshold:
            return current, SolveTrace(tuple(iterates), tuple(norms), True, step, threshold)
        if step == opts.max_iterations:
            break
        scale = np.abs(chain.node_masses) @ np.abs(current.y) * chain.gravity + abs(energy)
        slack = 64 * _EPS * scale
        direction = _newton_direction(_hessian_banded(chain, current.coordinates), grad)
        moved = _line_search(state, free, energy, grad, direction, slack)
        if moved is None:
            diag = float(np.max(np.abs(_hessian_banded(chain, current.coordinates)[3])))
            moved = _line_search(state, free, energy, grad, -grad / diag, slack)
        if moved is None:
            break
        free, current, energy, grad = moved
    raise MaxIterationsExceeded(
        f"chain equilibrium not reached (max force {norms[-1]:.3e}, target {threshold:.3e})",
        SolveTrace(tuple(iterates), tuple(norms), False, len(norms) - 1, threshold),
    )


def _line_search(state, free, energy, grad, direction, slack):
    slope = float(grad @ direction)
    if not slope < 0:
        return None
    t = 1.0
    while t > 1e-12:
        trial = free + t * direction
        try:
            p, e, g = state(trial)
        except ZeroLengthSegment:
            t *= 0.5
            continue
        if e <= energy + 1e-4 * t * slope + slack:
            return trial, p, e, g
        t *= 0.5
    return None


def max_deviation(chain: DiscreteChain, pos: NodePositions, shape: ElasticShape) -> float:
    """Largest distance between a node and the continuum point at the same rest arc length."""
    s = np.linspace(0.0, chain.length, chain.n_springs + 1)
    s[-1] = min(s[-1], shape.rest_length)
    ref = np.array([point_at(shape, si) for si in s])
    diff = pos.coordinates - ref
    return float(np.max(np.hypot(diff[:, 0], diff[:, 1])))


def tension_errors(chain: DiscreteChain, pos: NodePositions, shape: ElasticShape,
                   spec: CableSpec) -> np.ndarray:
    """Relative difference of each spring's tension from the continuum tension at its midpoint."""
    springs = spring_tensions(chain, pos)
    mids = (np.arange(chain.n_springs) + 0.5) * chain.rest_segment
    ref = np.array([tension_at(shape, spec, s) for s in mids])
    return (springs - ref) / ref


def horizontal_tensions(chain: DiscreteChain, pos: NodePositions) -> np.ndarray:
    """Horizontal component of each spring force; constant along the chain at equilibrium."""
    d, lengths = _segments(pos.coordinates)
    return (lengths - chain.rest_segment) / chain.segment_compliance * d[:, 0] / lengths

