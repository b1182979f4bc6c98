import numpy as np
import pytest

from catenary import discrete, elastic
from catenary.errors import InelasticNotSupported, TooFewSegments, ZeroLengthSegment
from catenary.model import CableSpec, make_span

SYM = make_span(0, 2, 0, 0)


def test_build_chain_masses():
    chain = discrete.build_chain(SYM, CableSpec(4.0, compliance_density=0.01), 4)
    np.testing.assert_array_equal(chain.node_masses, [0.5, 1, 1, 1, 0.5])
    assert chain.rest_segment == 1.0
    assert chain.total_mass == pytest.approx(4.0)
    assert chain.total_compliance == pytest.approx(0.04)


def test_build_chain_errors():
    assert discrete.build_chain(SYM, CableSpec(4.0, compliance_density=0.01), 2).n_springs == 2
    with pytest.raises(TooFewSegments):
        discrete.build_chain(SYM, CableSpec(4.0, compliance_density=0.01), 1)
    with pytest.raises(InelasticNotSupported):
        discrete.build_chain(SYM, CableSpec(4.0), 10)


def test_positions_pinned_and_validated():
    chain = discrete.build_chain(make_span(2, 5, 3, 7), CableSpec.from_gamma(6.0, 1.0), 3)
    pos = discrete.make_positions(chain, np.zeros((4, 2)))
    assert tuple(pos.coordinates[0]) == (2.0, 3.0) and tuple(pos.coordinates[-1]) == (5.0, 7.0)
    with pytest.raises(ValueError):
        discrete.make_positions(chain, np.zeros((3, 2)))


def test_force_residuals_hand_case():
    # one interior node at (1, -1); both springs have length sqrt(2), rest 1, compliance 0.5
    spec = CableSpec(2.0, rho=1.0, gravity=10.0, compliance_density=0.5)
    chain = discrete.build_chain(SYM, spec, 2)
    pos = discrete.make_positions(chain, [[0, 0], [1, -1], [2, 0]])
    tension = (np.sqrt(2) - 1) / 0.5
    expected_y = 2 * tension / np.sqrt(2) - 10.0
    res = discrete.force_residuals(chain, pos)
    assert res.shape == (1, 2)
    assert res[0, 0] == pytest.approx(0.0, abs=1e-15)
    assert res[0, 1] == pytest.approx(expected_y, rel=1e-14)


def test_zero_length_segment():
    chain = discrete.build_chain(SYM, CableSpec(4.0, compliance_density=0.1), 2)
    with pytest.raises(ZeroLengthSegment):
        discrete.force_residuals(chain, discrete.make_positions(chain, [[0, 0], [0, 0], [2, 0]]))


def test_energy_terms():
    spec = CableSpec(2.0, gravity=9.81, compliance_density=0.1)
    chain = discrete.build_chain(SYM, spec, 2)
    at_rest = discrete.make_positions(chain, [[0, 0], [1, 0], [2, 0]])
    assert discrete.total_energy(chain, at_rest) == 0.0
    low = discrete.make_positions(chain, [[0, 0], [1, -0.5], [2, 0]])
    lower = discrete.make_positions(chain, [[0, 0], [1, -1.0], [2, 0]])
    grav = lambda p: float(chain.node_masses @ p.y) * 9.81  # noqa: E731
    assert grav(lower) == pytest.approx(2 * grav(low))


def test_energy_gradient_is_minus_force():
    spec = CableSpec.from_gamma(6.0, 0.5)
    chain = discrete.build_chain(make_span(2, 5, 3, 7), spec, 12)
    rng = np.random.default_rng(5)
    coords = discrete.chord_positions(chain).coordinates
    coords[1:-1] += 0.2 * rng.standard_normal((11, 2))
    grad = -discrete.force_residuals(chain, discrete.NodePositions(coords)).ravel()
    step = 1e-6
    flat = coords[1:-1].ravel()
    for i in range(flat.size):
        c_up, c_dn = coords.copy(), coords.copy()
        c_up[1 + i // 2, i % 2] += step
        c_dn[1 + i // 2, i % 2] -= step
        num = (discrete.total_energy(chain, discrete.NodePositions(c_up))
               - discrete.total_energy(chain, discrete.NodePositions(c_dn))) / (2 * step)
        assert num == pytest.approx(grad[i], rel=1e-6, abs=1e-6 * np.max(np.abs(grad)))


def test_two_spring_symmetric_equilibrium():
    chain = discrete.build_chain(SYM, CableSpec(4.0, compliance_density=1e-3), 2)
    pos, trace = discrete.solve_equilibrium(chain)
    assert trace.converged
    assert pos.x[1] == pytest.approx(1.0, abs=1e-12)
    assert pos.y[1] < 0
    # vertical balance: 2 T sin(alpha) = m g with T = (l - h)/(q h) and sin(alpha) = depth/l
    depth = -pos.y[1]
    ell = np.hypot(1.0, depth)
    tension = (ell - 2.0) / (1e-3 * 2.0)
    assert 2 * tension * depth / ell == pytest.approx(2.0 * 9.81, rel=1e-9)


def test_equilibrium_energy_decreases_and_balances():
    spec = CableSpec.from_gamma(6.0, 1.0)
    span = make_span(2, 5, 3, 7)
    chain = discrete.build_chain(span, spec, 60)
    init = discrete.chord_positions(chain)
    pos, trace = discrete.solve_equilibrium(chain, init)
    assert discrete.total_energy(chain, pos) <= discrete.total_energy(chain, init)
    assert np.max(np.abs(discrete.force_residuals(chain, pos))) <= trace.tolerance
    h = discrete.horizontal_tensions(chain, pos)
    assert np.ptp(h) <= 1e-9 * np.mean(h)


def test_convergence_order():
    span = SYM
    spec = CableSpec.from_gamma(4.0, 1.0)
    shape, _ = elastic.solve(span, spec)
    errs = []
    for n in (50, 100, 200, 400):
        chain = discrete.build_chain(span, spec, n)
        pos, _ = discrete.solve_equilibrium(chain, discrete.continuum_positions(chain, shape))
        errs.append(discrete.max_deviation(chain, pos, shape))
    ratios = [a / b for a, b in zip(errs, errs[1:])]
    assert all(r >= 1.5 for r in ratios)


def test_tension_consistency():
    span = make_span(2, 5, 3, 7)
    spec = CableSpec.from_gamma(6.0, 1.0, rho=2.0, gravity=3.0)
    shape, _ = elastic.solve(span, spec)
    errs = []
    for n in (50, 100):
        chain = discrete.build_chain(span, spec, n)
        pos, _ = discrete.solve_equilibrium(chain, discrete.continuum_positions(chain, shape))
        errs.append(np.max(np.abs(discrete.tension_errors(chain, pos, shape, spec))))
    assert errs[0] < 10.0 / 50
    assert errs[1] < errs[0]


def test_small_gamma_near_rounding_floor():
    spec = CableSpec.from_gamma(4.0, 0.01)
    shape, _ = elastic.solve(SYM, spec)
    chain = discrete.build_chain(SYM, spec, 400)
    pos, trace = discrete.solve_equilibrium(chain, discrete.continuum_positions(chain, shape))
    assert trace.converged
    assert trace.tolerance >= discrete.CHAIN_OPTIONS.tolerance * chain.node_weight
    assert discrete.max_deviation(chain, pos, shape) < 1e-4
