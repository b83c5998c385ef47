"""Command-line entry point: single-point diagnostics, figure sweeps, and a
self-validation suite.

Exit codes: 0 success; 2 config error; 3 unstable point (point mode, record
still printed); 4 I/O error; 5 validation failure.
"""

import argparse
import json
import math
import os
import sys

import numpy as np

from .entanglement import log_negativity
from .errors import ExcimechError
from .linalg import (
    eigenvalues,
    integrate_moments,
    lyapunov_residual,
    solve_lyapunov,
)
from .params import build_params, serialize
from .reduced import dump_matrix_csv, reduced_model
from .steady_state import find_roots, intensity_residual, solve_steady_state
from .sweeps import (
    adiabatic_check,
    hybrid_spectrum,
    optimize_over_power,
    paper_config,
    sweep_detuning,
    sweep_power,
    write_csv,
    write_sidecar,
)
from .version import __version__

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_UNSTABLE = 3
EXIT_IO = 4
EXIT_VALIDATE = 5


def _log(msg):
    print(msg, file=sys.stderr)


def _load_config(path):
    """Built-in baseline merged with JSON overrides from `path` (if given)."""
    cfg = paper_config()
    if path is None:
        return cfg
    try:
        with open(path) as fh:
            overrides = json.load(fh)
    except OSError as exc:
        raise ExcimechError(f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ExcimechError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(overrides, dict):
        raise ExcimechError("config must be a JSON object")
    # an explicit detuning/drive/thermal key replaces the baseline one
    if any(k.startswith("delta") for k in overrides):
        for k in ("delta_over_omega_m", "delta_a", "delta_ex",
                  "delta_a_over_omega_m", "delta_ex_over_omega_m"):
            cfg.pop(k, None)
    if "pump_amplitude" in overrides:
        cfg.pop("power_uW", None)
    if "temperature_K" in overrides:
        cfg.pop("n_th", None)
    if "pump_photon_energy_J" in overrides:
        cfg.pop("pump_wavelength_nm", None)
    cfg.update(overrides)
    return cfg


def _branch_policy(text):
    if text in ("lowest", "highest"):
        return text
    return int(text)


def cmd_point(args):
    cfg = _load_config(args.config)
    if args.delta is not None:
        for k in ("delta_a", "delta_ex", "delta_a_over_omega_m",
                  "delta_ex_over_omega_m"):
            cfg.pop(k, None)
        cfg["delta_over_omega_m"] = args.delta
    if args.power_uW is not None:
        cfg.pop("pump_amplitude", None)
        cfg["power_uW"] = args.power_uW
    if args.nth is not None:
        cfg.pop("temperature_K", None)
        cfg["n_th"] = args.nth
    params = build_params(cfg)

    record = {"version": __version__, "params": serialize(params)}
    roots = find_roots(params)
    ss = solve_steady_state(params, branch_policy=_branch_policy(args.branch))
    rm = reduced_model(ss, params, rederived_sign=args.rederived_sign)
    eig = eigenvalues(rm.R)
    margin = float(eig.real.max())
    stable = margin < 0.0
    record.update({
        "roots": roots,
        "root_residuals": [float(intensity_residual(r, params)) for r in roots],
        "I_b": ss.I_b, "n_s": ss.n_s, "branch": ss.branch,
        "delta_a_eff": ss.delta_a_eff, "delta_ex_eff": ss.delta_ex_eff,
        "gamma_b": rm.gamma_b, "gamma_c": rm.gamma_c,
        "G_bc_re": rm.G_bc.real, "G_bc_im": rm.G_bc.imag,
        "eig_R": [[float(w.real), float(w.imag)] for w in eig],
        "stability_margin": margin, "stable": stable,
        "E_N": 0.0, "chi": None,
    })
    if stable:
        V = solve_lyapunov(rm.R, rm.D)
        ent = log_negativity(V, stable=True)
        record["E_N"] = ent.E_N
        record["chi"] = ent.chi
    else:
        record["E_N"] = None

    if args.dump_matrices:
        os.makedirs(args.dump_matrices, exist_ok=True)
        dump_matrix_csv(rm.R, os.path.join(args.dump_matrices, "R.csv"))
        dump_matrix_csv(rm.D, os.path.join(args.dump_matrices, "D.csv"))

    print(json.dumps(record, indent=2))
    return EXIT_OK if stable else EXIT_UNSTABLE


def _output_paths(out_dir, stem, force):
    os.makedirs(out_dir, exist_ok=True)
    csv_path = os.path.join(out_dir, stem + ".csv")
    json_path = os.path.join(out_dir, stem + ".json")
    for p in (csv_path, json_path):
        if os.path.exists(p) and not force:
            raise OSError(f"refusing to overwrite {p} (use --force)")
    return csv_path, json_path


def cmd_sweep(args):
    cfg = _load_config(args.config)
    params = build_params(cfg)
    jobs = args.jobs if args.jobs else (os.cpu_count() or 1)

    runs = []
    if args.fig2:
        runs.append(("fig2", lambda: sweep_detuning(
            params, rederived_sign=args.rederived_sign,
            branch_policy=_branch_policy(args.branch), jobs=jobs), False))
    if args.fig3a:
        runs.append(("fig3a", lambda: sweep_power(
            params, rederived_sign=args.rederived_sign,
            branch_policy=_branch_policy(args.branch), jobs=jobs), False))
    if args.fig3b:
        runs.append(("fig3b", lambda: hybrid_spectrum(
            params, rederived_sign=args.rederived_sign,
            branch_policy=_branch_policy(args.branch), jobs=jobs)[0], False))
    if args.fig4:
        runs.append(("fig4", lambda: optimize_over_power(
            params, rederived_sign=args.rederived_sign,
            branch_policy=_branch_policy(args.branch), jobs=jobs), True))
    if args.custom:
        runs.append(("custom", lambda: sweep_detuning(
            params,
            delta_range=(args.delta_min, args.delta_max),
            n_points=args.n_points,
            n_th_list=tuple(args.nth_list),
            power_uW=args.power_uW if args.power_uW is not None else 24.0,
            rederived_sign=args.rederived_sign,
            branch_policy=_branch_policy(args.branch), jobs=jobs), False))
    if not runs:
        _log("no sweep selected: use --fig2/--fig3a/--fig3b/--fig4/--custom")
        return EXIT_CONFIG

    for stem, run, argmax in runs:
        csv_path, json_path = _output_paths(args.out, stem, args.force)
        result = run()
        write_csv(result, csv_path, include_argmax=argmax)
        write_sidecar(result, json_path)
        n_flag = sum(1 for p in result.points if p.error is not None)
        n_unst = sum(1 for p in result.points if not p.stable)
        _log(f"{stem}: {len(result.points)} points -> {csv_path} "
             f"({n_unst} unstable, {n_flag} flagged)")
    return EXIT_OK


def cmd_validate(args):
    cfg = _load_config(args.config)
    params = build_params(cfg)
    checks = []

    # Lyapunov solver vs independent moment integration on random stable pairs
    rng = np.random.default_rng(20240817)
    worst_res, worst_agree = 0.0, 0.0
    for _ in range(20):
        A = rng.standard_normal((4, 4))
        shift = float(eigenvalues(A).real.max()) + 0.5 * np.linalg.norm(A, 2)
        R = A - shift * np.eye(4)
        B = rng.standard_normal((4, 4))
        D = B @ B.T
        V = solve_lyapunov(R, D)
        res = lyapunov_residual(R, D, V) / (
            np.linalg.norm(R) * np.linalg.norm(V.M) + np.linalg.norm(D))
        worst_res = max(worst_res, res)
        Vi = integrate_moments(R, D, np.zeros((4, 4)),
                               t_end=1e4 / np.linalg.norm(R, 2))
        agree = np.linalg.norm(V.M - Vi.M) / np.linalg.norm(V.M)
        worst_agree = max(worst_agree, agree)
    checks.append(("lyapunov residual (random pairs)", worst_res < 1e-9,
                   f"worst {worst_res:.3e}"))
    checks.append(("lyapunov vs moment integration", worst_agree < 1e-8,
                   f"worst {worst_agree:.3e}"))

    # steady-state root residuals over a small detuning grid
    worst_root = 0.0
    for dwm in np.linspace(0.5, 1.5, 11):
        from .params import replace_params
        p = replace_params(params, delta_a=-dwm * params.omega_m,
                           delta_ex=-dwm * params.omega_m)
        for r in find_roots(p):
            worst_root = max(worst_root, abs(intensity_residual(r, p))
                             / max(p.pump_amplitude ** 2, 1e-20))
    checks.append(("steady-state root residuals", worst_root < 1e-8,
                   f"worst {worst_root:.3e}"))

    # drift stability at the configured operating point (reported, not a
    # code-correctness gate: instability is a property of the parameters)
    ss = solve_steady_state(params)
    rm = reduced_model(ss, params, rederived_sign=args.rederived_sign)
    margin = float(eigenvalues(rm.R).real.max())
    state = "stable" if margin < 0.0 else "UNSTABLE"
    checks.append(("drift stability at operating point", True,
                   f"{state}, margin {margin:.3e} s^-1 at "
                   f"delta_a {params.delta_a:.3e}"))

    # adiabatic elimination cross-check: reduced vs full covariance at the
    # operating point (discrepancy recorded; finiteness asserted)
    rows = adiabatic_check(params, scales=(1.0,),
                           omega_m_sign=args.omega_m_sign,
                           rederived_sign=args.rederived_sign)
    finite = all(math.isfinite(r.discrepancy) for r in rows)
    checks.append(("adiabatic elimination cross-check", finite,
                   ", ".join(f"scale {r.scale:g}: {r.discrepancy:.3e}"
                             for r in rows)))

    if not params.adiabatic_regime:
        _log("warning: kappa <= g, adiabatic elimination outside its "
             "regime of validity")

    width = max(len(c[0]) for c in checks) + 2
    all_ok = True
    for name, ok, detail in checks:
        all_ok &= ok
        print(f"{name:<{width}} {'PASS' if ok else 'FAIL'}  {detail}")
    return EXIT_OK if all_ok else EXIT_VALIDATE


def build_parser():
    parser = argparse.ArgumentParser(
        prog="excimech",
        description="Steady-state exciton-mechanics entanglement simulator")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON overrides on the built-in baseline")
        p.add_argument("--branch", default="lowest",
                       help="steady-state branch: lowest|highest|<index>")
        p.add_argument("--rederived-sign", action="store_true",
                       help="flip the (1,3) drift-matrix cross-coupling sign")
        p.add_argument("--omega-m-sign", type=int, choices=(-1, 1), default=-1,
                       help="mechanical rotation sign in the unreduced "
                            "oracle model")

    p_point = sub.add_parser("point", help="diagnostics at one parameter point")
    common(p_point)
    p_point.add_argument("--delta", type=float,
                         help="red-detuning magnitude in units of omega_m")
    p_point.add_argument("--power-uW", type=float)
    p_point.add_argument("--nth", type=float)
    p_point.add_argument("--dump-matrices", metavar="DIR",
                         help="dump drift/noise matrices as CSV into DIR")

    p_sweep = sub.add_parser("sweep", help="figure sweeps to CSV + JSON sidecar")
    common(p_sweep)
    p_sweep.add_argument("--out", default=".", help="output directory")
    p_sweep.add_argument("--force", action="store_true",
                         help="overwrite existing output files")
    p_sweep.add_argument("--jobs", type=int, default=0,
                         help="parallel workers (0 = all cores)")
    p_sweep.add_argument("--fig2", action="store_true")
    p_sweep.add_argument("--fig3a", action="store_true")
    p_sweep.add_argument("--fig3b", action="store_true")
    p_sweep.add_argument("--fig4", action="store_true")
    p_sweep.add_argument("--custom", action="store_true")
    p_sweep.add_argument("--delta-min", type=float, default=0.5)
    p_sweep.add_argument("--delta-max", type=float, default=1.5)
    p_sweep.add_argument("--n-points", type=int, default=400)
    p_sweep.add_argument("--nth-list", type=float, nargs="+",
                         default=[70.0, 100.0, 130.0, 160.0])
    p_sweep.add_argument("--power-uW", type=float)

    p_val = sub.add_parser("validate", help="run the internal oracle suite")
    common(p_val)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "point":
            return cmd_point(args)
        if args.command == "sweep":
            return cmd_sweep(args)
        return cmd_validate(args)
    except ExcimechError as exc:
        _log(f"error: {exc}")
        return EXIT_CONFIG
    except OSError as exc:
        _log(f"I/O error: {exc}")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
