"""Mean-field steady state: intensity equation, roots, branch fields."""

import cmath
import math

import numpy as np
import pytest

from excimech import (
    BranchOutOfRange,
    build_params,
    find_roots,
    intensity_residual,
    paper_config,
    paper_params,
    replace_params,
    serialize,
    solve_steady_state,
)


def linear_params(delta_over_wm=0.0, eps=4.0e12):
    """alpha = 0, g0 = 0: the intensity equation becomes linear in I_b."""
    p = paper_params()
    delta = -delta_over_wm * p.omega_m
    return replace_params(p, alpha=0.0, g0=0.0, delta_a=delta, delta_ex=delta,
                          pump_amplitude=eps)


def closed_form_linear_root(p):
    """Exact root for alpha = 0, g0 = 0 (detunings constant in I_b)."""
    re = p.kappa * p.gamma / 4.0 + p.g ** 2 - p.delta_a * p.delta_ex
    im = p.kappa * p.delta_ex / 2.0 + p.gamma * p.delta_a / 2.0
    return p.g ** 2 * p.pump_amplitude ** 2 / (re ** 2 + im ** 2)


def test_residual_dark_state():
    p = replace_params(paper_params(), pump_amplitude=0.0)
    assert intensity_residual(0.0, p) == 0.0


def test_residual_at_origin_with_drive():
    p = paper_params()
    assert intensity_residual(0.0, p) == pytest.approx(
        -p.pump_amplitude ** 2, rel=1e-14)


def test_residual_zero_at_closed_form_root():
    p = linear_params(0.0)
    root = p.g ** 2 * p.pump_amplitude ** 2 / (p.kappa * p.gamma / 4.0 + p.g ** 2) ** 2
    assert abs(intensity_residual(root, p)) < 1e-10 * p.pump_amplitude ** 2


def test_find_roots_undriven():
    p = replace_params(paper_params(), pump_amplitude=0.0)
    assert find_roots(p) == [0.0]


def test_find_roots_linear_closed_form():
    p = linear_params(0.0)
    roots = find_roots(p)
    assert len(roots) == 1
    expected = closed_form_linear_root(p)
    assert roots[0] == pytest.approx(expected, rel=1e-10)


def test_find_roots_operating_point():
    p = paper_params(delta_over_omega_m=1.1, power_uW=24.0)
    roots = find_roots(p)
    assert len(roots) in (1, 3)
    for r in roots:
        assert abs(intensity_residual(r, p)) < 1e-8 * p.pump_amplitude ** 2


def test_solve_undriven_all_zero():
    p = replace_params(paper_params(), pump_amplitude=0.0)
    ss = solve_steady_state(p)
    assert ss.I_b == 0.0 and ss.n_s == 0.0
    assert ss.a_s == 0 and ss.b_s == 0 and ss.c_s == 0


def test_solve_no_optomechanics_no_mech_field():
    p = replace_params(paper_params(), g0=0.0)
    ss = solve_steady_state(p)
    assert ss.c_s == 0
    assert ss.I_b > 0


def test_photon_number_consistency():
    p = paper_params(delta_over_omega_m=1.1)
    ss = solve_steady_state(p)
    # modulus relation between the exciton and cavity mean fields
    n_from_b = ((p.gamma / 2.0) ** 2 + ss.delta_ex_eff ** 2) * ss.I_b / p.g ** 2
    assert ss.n_s == pytest.approx(n_from_b, rel=1e-8)
    assert abs(ss.b_s) ** 2 == pytest.approx(ss.I_b, rel=1e-8)


def test_phase_convention():
    p = paper_params(delta_over_omega_m=1.1)
    ss = solve_steady_state(p)
    assert cmath.phase(ss.a_s) == pytest.approx(-math.pi / 2.0, abs=1e-10)


def test_mechanical_field_relation():
    p = paper_params(delta_over_omega_m=0.8)
    ss = solve_steady_state(p)
    lhs = (p.gamma_m / 2.0 + 1j * p.omega_m) * ss.c_s
    rhs = 1j * p.g0 * ss.n_s
    assert abs(lhs - rhs) <= 1e-10 * abs(rhs)


def test_monostable_linear_grid():
    for dwm in np.linspace(-1.5, 1.5, 100):
        p = linear_params(dwm)
        ss = solve_steady_state(p)
        assert ss.n_roots == 1


def test_linear_scaling_doubling_drive():
    p1 = linear_params(0.7, eps=2.0e12)
    p2 = linear_params(0.7, eps=4.0e12)
    I1 = solve_steady_state(p1).I_b
    I2 = solve_steady_state(p2).I_b
    assert I2 == pytest.approx(4.0 * I1, rel=1e-9)


def test_branch_out_of_range():
    p = paper_params()
    with pytest.raises(BranchOutOfRange):
        solve_steady_state(p, branch_policy=7)


def test_branch_policies_agree_when_unique():
    p = paper_params(delta_over_omega_m=1.1)
    lo = solve_steady_state(p, branch_policy="lowest")
    hi = solve_steady_state(p, branch_policy="highest")
    if lo.n_roots == 1:
        assert lo.I_b == hi.I_b
    else:
        assert lo.I_b < hi.I_b


def test_residual_vectorized():
    p = paper_params()
    grid = np.array([0.0, 1.0, 5.0])
    vals = intensity_residual(grid, p)
    assert vals.shape == (3,)
    assert vals[0] == pytest.approx(intensity_residual(0.0, p))
