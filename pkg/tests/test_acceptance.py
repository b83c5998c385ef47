"""Acceptance suite: one test (one pass/fail line under -v) per criterion.

Shared sweeps are computed once per module in fixtures; each criterion test
then checks its stated bound at the stated tolerance.
"""

import math
import time

import numpy as np
import pytest

from excimech import (
    eigenvalues,
    find_roots,
    hybrid_spectrum,
    integrate_moments,
    intensity_residual,
    log_negativity,
    lyapunov_residual,
    optimize_over_power,
    paper_params,
    reduced_model,
    replace_params,
    solve_lyapunov,
    solve_steady_state,
    sweep_detuning,
)

FIG4_DELTA_RANGE = (0.9, 1.4)
FIG4_N_POINTS = 51
FIG4_NTH = (70.0, 100.0, 130.0)
FIG4_FIXED_POWERS = (1.0, 17.8, 24.0, 50.0)


@pytest.fixture(scope="module")
def fig2_sweep():
    t0 = time.perf_counter()
    res = sweep_detuning(paper_params())
    return res, time.perf_counter() - t0


@pytest.fixture(scope="module")
def fig2_hot_sweep():
    return sweep_detuning(paper_params(), n_th_list=(180.0, 260.0))


@pytest.fixture(scope="module")
def fig3_spectrum():
    return hybrid_spectrum(paper_params(), delta=1.20, n_th=100.0)


@pytest.fixture(scope="module")
def fig4_optimized():
    return optimize_over_power(paper_params(), delta_range=FIG4_DELTA_RANGE,
                               n_points=FIG4_N_POINTS, n_th_list=FIG4_NTH,
                               coarse_points=25)


@pytest.fixture(scope="module")
def fig4_fixed_power():
    return {
        P: sweep_detuning(paper_params(), delta_range=FIG4_DELTA_RANGE,
                          n_points=FIG4_N_POINTS, n_th_list=FIG4_NTH,
                          power_uW=P)
        for P in FIG4_FIXED_POWERS
    }


def curve(result, **match):
    """(delta, E_N, stable) arrays for one swept curve, in grid order."""
    pts = result.filter(**match)
    return (np.array([p.delta_over_wm for p in pts]),
            np.array([p.E_N for p in pts]),
            np.array([p.stable for p in pts]))


def rebuild_pipeline(pt):
    """Recompute (R, D, V) at a sweep point from its coordinates."""
    p = paper_params(delta_over_omega_m=pt.delta_over_wm,
                     power_uW=pt.power_uW, n_th=pt.n_th)
    ss = solve_steady_state(p)
    rm = reduced_model(ss, p)
    V = solve_lyapunov(rm.R, rm.D)
    return rm.R, rm.D, V.M


def test_lyapunov_correctness(fig2_sweep):
    t0 = time.perf_counter()
    rng = np.random.default_rng(20240901)
    for _ in range(100):
        A = rng.standard_normal((4, 4))
        shift = float(eigenvalues(A).real.max()) + 0.5 * np.linalg.norm(A, 2)
        R = A - shift * np.eye(4)
        B = rng.standard_normal((4, 4))
        D = B @ B.T
        V = solve_lyapunov(R, D)
        bound = 1e-9 * (np.linalg.norm(R) * np.linalg.norm(V.M)
                        + np.linalg.norm(D))
        assert lyapunov_residual(R, D, V) <= bound
        Vi = integrate_moments(R, D, np.zeros((4, 4)),
                               t_end=1e4 / np.linalg.norm(R, 2))
        rel = np.linalg.norm(V.M - Vi.M) / np.linalg.norm(V.M)
        assert rel < 1e-8
    for pt in fig2_sweep[0].points:
        if not pt.stable:
            continue
        R, D, V = rebuild_pipeline(pt)
        bound = 1e-9 * (np.linalg.norm(R) * np.linalg.norm(V)
                        + np.linalg.norm(D))
        assert lyapunov_residual(R, D, V) <= bound
    assert time.perf_counter() - t0 < 10.0


def test_entanglement_measure_oracle():
    t0 = time.perf_counter()
    assert log_negativity(0.5 * np.eye(4)).E_N == 0.0
    for r in (0.25, 0.5, 1.0):
        ch, sh = 0.5 * math.cosh(2 * r), 0.5 * math.sinh(2 * r)
        V = np.zeros((4, 4))
        V[:2, :2] = ch * np.eye(2)
        V[2:, 2:] = ch * np.eye(2)
        V[:2, 2:] = sh * np.diag([1.0, -1.0])
        V[2:, :2] = V[:2, 2:].T
        assert log_negativity(V).E_N == pytest.approx(2 * r, abs=1e-10)
    for n in (0.0, 1.0, 100.0):
        V = np.diag([0.5, 0.5, n + 0.5, n + 0.5])
        assert log_negativity(V).E_N == 0.0
    assert time.perf_counter() - t0 < 1.0


def test_decoupled_steady_state():
    for n_th in (0.0, 100.0):
        p = replace_params(paper_params(n_th=n_th), pump_amplitude=0.0)
        ss = solve_steady_state(p)
        rm = reduced_model(ss, p)
        V = solve_lyapunov(rm.R, rm.D)
        expected = np.diag([0.5, 0.5, n_th + 0.5, n_th + 0.5])
        assert np.linalg.norm(V.M - expected) <= 1e-8 * np.linalg.norm(expected)


def test_fig2_interior_peak(fig2_sweep):
    deltas, ens, stable = curve(fig2_sweep[0], n_th=70.0)
    best = int(np.nanargmax(np.where(stable, ens, np.nan)))
    assert ens[best] > 0.0
    assert 0 < best < len(deltas) - 1


def test_fig2_thermal_ordering(fig2_sweep):
    curves = {nth: curve(fig2_sweep[0], n_th=nth)
              for nth in (70.0, 100.0, 130.0, 160.0)}
    for cold, warm in ((70.0, 100.0), (100.0, 130.0), (130.0, 160.0)):
        _, e_c, s_c = curves[cold]
        _, e_w, s_w = curves[warm]
        both = s_c & s_w
        assert np.all(e_c[both] >= e_w[both])


def test_fig2_thermal_robustness_bounds(fig2_hot_sweep):
    _, e180, s180 = curve(fig2_hot_sweep, n_th=180.0)
    _, e260, s260 = curve(fig2_hot_sweep, n_th=260.0)
    assert np.nanmax(np.where(s180, e180, np.nan)) > 0.0
    assert np.nanmax(np.where(s260, e260, np.nan)) < 0.02


def test_fig2_runtime(fig2_sweep):
    assert fig2_sweep[1] < 120.0


def test_fig3_peak_power_window(fig3_spectrum):
    res, _ = fig3_spectrum
    powers = np.array([p.power_uW for p in res.points])
    ens = np.array([p.E_N if p.stable else np.nan for p in res.points])
    best = int(np.nanargmax(ens))
    assert 0 < best < len(powers) - 1          # interior maximum
    assert 8.0 <= powers[best] <= 35.0


def test_fig3_gap_coincidence(fig3_spectrum):
    res, rows = fig3_spectrum
    ens = np.array([p.E_N if p.stable else np.nan for p in res.points])
    best_en = int(np.nanargmax(ens))
    best_gap = int(np.nanargmin(rows[:, 5]))
    assert abs(best_en - best_gap) <= 2


def test_fig4_dominates_fixed_power(fig4_optimized, fig4_fixed_power):
    for nth in FIG4_NTH:
        _, e_opt, s_opt = curve(fig4_optimized, n_th=nth)
        for P, fixed in fig4_fixed_power.items():
            _, e_fix, s_fix = curve(fixed, n_th=nth)
            both = s_opt & s_fix
            assert np.all(e_opt[both] - e_fix[both] >= -1e-6), \
                f"optimized curve dips below fixed P={P} uW at n_th={nth}"


def test_fig4_thermal_ordering(fig4_optimized):
    curves = {nth: curve(fig4_optimized, n_th=nth) for nth in FIG4_NTH}
    for cold, warm in ((70.0, 100.0), (100.0, 130.0)):
        _, e_c, s_c = curves[cold]
        _, e_w, s_w = curves[warm]
        both = s_c & s_w
        assert np.all(e_c[both] >= e_w[both])


def test_fig4_peak_location_shifts(fig4_optimized):
    argmax = []
    for nth in FIG4_NTH:
        deltas, ens, stable = curve(fig4_optimized, n_th=nth)
        best = int(np.nanargmax(np.where(stable, ens, np.nan)))
        argmax.append(deltas[best])
    assert len(set(argmax)) >= 2


def test_stability_of_entangled_points(fig2_sweep, fig2_hot_sweep,
                                       fig3_spectrum, fig4_optimized,
                                       fig4_fixed_power):
    results = [fig2_sweep[0], fig2_hot_sweep, fig3_spectrum[0],
               fig4_optimized] + list(fig4_fixed_power.values())
    checked = 0
    for res in results:
        for pt in res.points:
            if not math.isnan(pt.E_N) and pt.E_N > 0.0:
                assert pt.stable and pt.margin < 0.0
                checked += 1
    assert checked > 0


def test_steady_state_oracle():
    base = paper_params()
    # linear case: constant detunings make the intensity equation linear
    for dwm in np.linspace(-1.5, 1.5, 100):
        delta = -dwm * base.omega_m
        p = replace_params(base, alpha=0.0, g0=0.0, delta_a=delta,
                           delta_ex=delta)
        re = p.kappa * p.gamma / 4.0 + p.g ** 2 - p.delta_a * p.delta_ex
        im = p.kappa * p.delta_ex / 2.0 + p.gamma * p.delta_a / 2.0
        expected = p.g ** 2 * p.pump_amplitude ** 2 / (re ** 2 + im ** 2)
        ss = solve_steady_state(p)
        assert ss.n_roots == 1
        assert ss.I_b == pytest.approx(expected, rel=1e-10)
    # nonlinear case: residual bound on every returned root
    for dwm in np.linspace(0.5, 1.5, 100):
        p = replace_params(base, delta_a=-dwm * base.omega_m,
                           delta_ex=-dwm * base.omega_m)
        for root in find_roots(p):
            assert abs(intensity_residual(root, p)) < 1e-8 * p.pump_amplitude ** 2


def test_adiabatic_elimination_trend():
    from excimech import adiabatic_check
    # weak drive keeps the coupling-matched pump on the ascending branch
    base = paper_params(delta_over_omega_m=1.1, power_uW=1e-4)
    rows = adiabatic_check(base, scales=(1.0, 10.0, 100.0))
    disc = [r.discrepancy for r in rows]
    assert disc[0] > disc[1] > disc[2], \
        f"discrepancy not strictly decreasing: {disc}"
