import math

import numpy as np
import pytest
from scipy.integrate import quad

from catenary import inelastic
from catenary.errors import HeightMismatch, NotSagging, OutOfRange, Overflow
from catenary.model import CableSpec, make_span
from catenary.rootfind import bisection

# Reference values computed once with 40-digit arithmetic
LAM_SYM = 0.45928043015522318130863141186164222533  # span (0,2,0,0), L = 4
YMIN_SYM = -1.592776711720598667253582363427006821118
STEEP = {
    6.0: dict(xi=1.608723736575905546702135706117672277262,
              lam=0.9324161544310155965949538078559945422365,
              x_min=2.749667045446357254127239949420396719704,
              y_min=2.682043899891689396936313474523296728996,
              s_min=0.8330851636404492002275731111115347911732),
    12.0: dict(xi=3.178783767177798232287820732055363257853,
               lam=0.4718785893800309006528785664086153266034,
               x_min=3.336459343102313715080914318399039543849,
               y_min=-0.5489604782669942242354091860501321227533,
               s_min=3.993053644117658291703904082513750850214),
}


def test_solve_xi_ratio_two():
    xi, trace = inelastic.solve_xi(inelastic.XiProblem(2.0, 1.0))
    assert xi == pytest.approx(2.177318984965306752, abs=1e-12)
    assert 1.0 / xi == pytest.approx(LAM_SYM, abs=1e-12)
    assert xi < math.sqrt(12.0)


def test_solve_xi_steep_span_ratio():
    p = inelastic.XiProblem.for_span(make_span(2, 5, 3, 7), 6.0)
    assert p.ratio == pytest.approx(math.sqrt(20) / 3, rel=1e-15)
    xi, _ = inelastic.solve_xi(p)
    assert xi == pytest.approx(STEEP[6.0]["xi"], abs=1e-12)
    assert p.half_span / xi == pytest.approx(STEEP[6.0]["lam"], abs=1e-12)


def test_solve_xi_near_taut():
    xi, _ = inelastic.solve_xi(inelastic.XiProblem(1.0 + 1e-6, 1.0))
    assert 0 < xi < 0.01
    # sinh(xi)/xi - 1 = xi^2/6 + xi^4/120 + ... = eps gives xi ~ sqrt(6 eps)(1 - 0.15 eps)
    assert xi == pytest.approx(math.sqrt(6e-6) * (1 - 0.15e-6), rel=1e-11)


def test_solve_xi_agrees_with_bisection_everywhere():
    for r in [1.0 + 1e-9, 1.001, 1.5, 3.0, 50.0, 499.0, 501.0, 1e6, 1e30, 1e200]:
        xi, trace = inelastic.solve_xi(inelastic.XiProblem(r, 1.0))
        f, _ = inelastic.xi_equation(r)
        ref = bisection(f, 0.5 * xi, trace.iterates[0])
        assert xi == pytest.approx(ref, abs=1e-10 * max(1.0, xi))
        assert all(b <= a for a, b in zip(trace.iterates, trace.iterates[1:]))


def test_xi_guess_bounds_root_beyond_sqrt_regime():
    for r in [500.5, 1e4, 1e12, 1e100]:
        guess = inelastic.xi_initial_guess(r)
        assert math.sinh(guess) > r * guess


def test_solve_xi_rejects_taut():
    with pytest.raises(NotSagging):
        inelastic.solve_xi(inelastic.XiProblem(1.0, 1.0))


def test_solve_xi_overflow_limit():
    with pytest.raises(Overflow):
        inelastic.solve_xi(inelastic.XiProblem(1e306, 1.0))


def test_equal_heights_reference():
    shape = inelastic.solve_equal_heights(make_span(0, 2, 0, 0), 4.0)
    assert shape.lam == pytest.approx(LAM_SYM, abs=1e-12)
    assert shape.x_min == 1.0
    assert shape.y_min == pytest.approx(YMIN_SYM, abs=1e-12)
    assert shape.s_min == pytest.approx(2.0, abs=1e-12)


def test_equal_heights_translation():
    low = inelastic.solve_equal_heights(make_span(0, 2, 0, 0), 4.0)
    high = inelastic.solve_equal_heights(make_span(0, 2, 5, 5), 4.0)
    assert high.lam == low.lam and high.x_min == low.x_min
    assert high.y_min == pytest.approx(5.0 + low.y_min, abs=1e-14)


def test_equal_heights_errors():
    with pytest.raises(NotSagging) as info:
        inelastic.solve_equal_heights(make_span(0, 2, 0, 0), 2.0)
    assert info.value.chord == 2.0
    with pytest.raises(HeightMismatch):
        inelastic.solve_equal_heights(make_span(0, 2, 0, 1), 4.0)


def test_residual_g_values():
    assert inelastic.residual_g(1.0, 0.7, make_span(0, 2, 0, 0)) == 0.0
    span = make_span(2, 5, 3, 7)
    assert inelastic.residual_g(3.5, 0.932, span) == pytest.approx(-4 / 0.932, rel=1e-14)
    lam = STEEP[6.0]["lam"]
    ref = bisection(lambda x: inelastic.residual_g(x, lam, span), 2 - 10 * lam, 3.5)
    assert ref == pytest.approx(STEEP[6.0]["x_min"], abs=1e-10)


def test_residual_g_prime_matches_difference():
    span = make_span(2, 5, 3, 7)
    for x in [1.0, 2.7, 3.5, 4.9]:
        step = 1e-6
        num = (inelastic.residual_g(x + step, 0.9, span) - inelastic.residual_g(x - step, 0.9, span)) / (2 * step)
        assert inelastic.residual_g_prime(x, 0.9, span) == pytest.approx(num, rel=1e-7)


@pytest.mark.parametrize("L", [6.0, 12.0])
def test_solve_general_steep_span(L):
    shape = inelastic.solve_general(make_span(2, 5, 3, 7), L)
    ref = STEEP[L]
    for name in ("lam", "x_min", "y_min", "s_min"):
        assert getattr(shape, name) == pytest.approx(ref[name], abs=1e-11)


def test_solve_general_level_matches_equal_heights():
    span = make_span(0, 2, 0, 0)
    assert inelastic.solve_general(span, 4.0) == inelastic.solve_equal_heights(span, 4.0)


@pytest.mark.parametrize("L", [6.0, 12.0])
def test_x_min_newton_overshoots_once_then_climbs(L):
    span = make_span(2, 5, 3, 7)
    x, trace = inelastic.solve_x_min(STEEP[L]["lam"], span)
    its = trace.iterates
    assert its[0] == 3.5
    assert its[1] <= x
    assert all(b >= a for a, b in zip(its[1:], its[2:]))


def test_lowest_point_left_of_span():
    # a nearly taut steep cable bottoms out before the left anchor
    shape = inelastic.solve_general(make_span(0, 1, 0, 5), 5.2)
    assert shape.x_min < 0 and shape.s_min < 0
    assert inelastic.eval_y(shape, 0.0) == pytest.approx(0.0, abs=1e-9)
    assert inelastic.eval_y(shape, 1.0) == pytest.approx(5.0, abs=1e-9)


def test_eval_y_symmetry_and_arrays():
    shape = inelastic.solve_general(make_span(2, 5, 3, 7), 6.0)
    d = np.linspace(0, 2, 7)
    np.testing.assert_allclose(inelastic.eval_y(shape, shape.x_min + d),
                               inelastic.eval_y(shape, shape.x_min - d), rtol=1e-14)
    assert inelastic.eval_y(shape, shape.x_min) == shape.y_min
    sym = inelastic.solve_general(make_span(0, 2, 0, 0), 4.0)
    assert inelastic.eval_y(sym, 0.0) == pytest.approx(0.0, abs=1e-12)


def test_arclength_matches_quadrature():
    shape = inelastic.solve_general(make_span(0, 2, 0, 0), 4.0)
    assert inelastic.arclength_at(shape, 0.0) == pytest.approx(0.0, abs=1e-14)
    assert inelastic.arclength_at(shape, shape.x_min) == shape.s_min
    total, _ = quad(lambda x: math.cosh((x - shape.x_min) / shape.lam), 0, 2, epsabs=1e-13)
    assert inelastic.arclength_at(shape, 2.0) == pytest.approx(total, abs=1e-10)
    assert total == pytest.approx(4.0, abs=1e-10)


def test_point_at_arclength_round_trip():
    shape = inelastic.solve_general(make_span(2, 5, 3, 7), 12.0)
    xs = np.random.default_rng(3).uniform(2, 5, 100)
    worst = max(abs(inelastic.point_at_arclength(shape, inelastic.arclength_at(shape, x))[0] - x) for x in xs)
    assert worst < 1e-10 * 3
    x, y = inelastic.point_at_arclength(shape, 0.0)
    assert (x, y) == (pytest.approx(2.0, abs=1e-12), pytest.approx(3.0, abs=1e-12))
    assert inelastic.point_at_arclength(shape, shape.s_min) == (shape.x_min, shape.y_min)


def test_point_at_arclength_range():
    shape = inelastic.solve_general(make_span(0, 2, 0, 0), 4.0)
    with pytest.raises(OutOfRange):
        inelastic.point_at_arclength(shape, 4.1)
    with pytest.raises(OutOfRange):
        inelastic.point_at_arclength(shape, -0.1)


def test_tension_values():
    shape = inelastic.solve_general(make_span(0, 2, 0, 0), 4.0)
    spec = CableSpec(4.0)
    assert inelastic.tension_at(shape, spec, 1.0) == pytest.approx(4.505541019822739, rel=1e-12)
    assert inelastic.tension_at(shape, spec, 0.3) == pytest.approx(inelastic.tension_at(shape, spec, 1.7), rel=1e-14)
    # T cos(alpha) = T_min, with tan(alpha) = y'(x)
    x = 0.4
    slope = math.sinh((x - shape.x_min) / shape.lam)
    t_min = 9.81 * shape.lam
    assert inelastic.tension_at(shape, spec, x) == pytest.approx(t_min * math.sqrt(1 + slope * slope), rel=1e-12)


def test_lambda_decreases_with_length():
    span = make_span(2, 5, 3, 7)
    lams = [inelastic.solve_general(span, L).lam for L in np.linspace(5.01, 30, 20)]
    assert all(b < a for a, b in zip(lams, lams[1:]))
