"""Adiabatically reduced exciton-mechanical model.

With the cavity eliminated (valid for kappa >> g), both modes acquire
cavity-induced (Purcell) decay rates, frequency shifts, and a dissipative
cross coupling G_bc mediated by the shared photon-loss channel.  This module
computes those coefficients and assembles the 4x4 drift matrix R and noise
matrix D of the quadrature dynamics du/dt = R u + eta, with quadrature
ordering (x_b, y_b, x_c, y_c).

A 6x6 drift/noise pair for the unreduced three-mode model is also provided
as an independent cross-check of the elimination.
"""

import cmath
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .params import SystemParams
from .steady_state import SteadyState


@dataclass
class ReducedModel:
    """Coefficients of the reduced two-mode dynamics (rates in 1/s)."""

    G: float                 # many-photon optomechanical coupling g0*sqrt(n_s)
    gamma_b: float           # cavity-induced exciton decay
    gamma_c: float           # cavity-induced mechanical decay
    Gamma_b: float           # total exciton rate gamma + gamma_b
    dw_ex: float             # exciton frequency shift
    dw_m: float              # mechanical frequency shift
    lambda_b: complex        # cavity-noise coupling into the exciton mode
    lambda_c: complex        # cavity-noise coupling into the mechanical mode
    G_bc: complex            # dissipative exciton-mechanics cross coupling
    Gamma_b_plus: float      # Gamma_b + 4*alpha*Im(b_s^2)
    Gamma_b_minus: float     # Gamma_b - 4*alpha*Im(b_s^2)
    Delta_ex_plus: float     # shifted detuning + 2*alpha*Re(b_s^2)
    Delta_ex_minus: float    # shifted detuning - 2*alpha*Re(b_s^2)
    R: Optional[np.ndarray] = None
    D: Optional[np.ndarray] = None


def effective_rates(ss: SteadyState, params: SystemParams) -> ReducedModel:
    """Cavity-induced rates, shifts, and couplings at the given steady state.

    The Purcell rates carry the Lorentzian cavity response evaluated at the
    effective cavity detuning: gamma_b = (4g^2/kappa) / (1+(2*da_eff/kappa)^2)
    and likewise gamma_c with G in place of g.
    """
    p = params
    da = ss.delta_a_eff
    dex = ss.delta_ex_eff
    G = p.g0 * math.sqrt(ss.n_s)
    bracket = 1.0 + (2.0 * da / p.kappa) ** 2
    gamma_b = (4.0 * p.g ** 2 / p.kappa) / bracket
    gamma_c = (4.0 * G ** 2 / p.kappa) / bracket
    Gamma_b = p.gamma + gamma_b
    dw_ex = gamma_b * da / p.kappa
    dw_m = 2.0 * gamma_c * da / p.kappa
    lam_fac = (1.0 + 2j * da / p.kappa) / math.sqrt(bracket)
    lambda_b = math.sqrt(gamma_b) * lam_fac
    lambda_c = math.sqrt(gamma_c) * lam_fac
    G_bc = math.sqrt(gamma_b * gamma_c) * (1.0 + 2j * da / p.kappa)

    bs2 = ss.b_s ** 2
    kerr_im = 4.0 * p.alpha * bs2.imag
    kerr_re = 2.0 * p.alpha * bs2.real
    base = dex - gamma_b * da / p.kappa
    return ReducedModel(
        G=G, gamma_b=gamma_b, gamma_c=gamma_c, Gamma_b=Gamma_b,
        dw_ex=dw_ex, dw_m=dw_m, lambda_b=lambda_b, lambda_c=lambda_c,
        G_bc=G_bc,
        Gamma_b_plus=Gamma_b + kerr_im, Gamma_b_minus=Gamma_b - kerr_im,
        Delta_ex_plus=base + kerr_re, Delta_ex_minus=base - kerr_re,
    )


def build_R(rm: ReducedModel, ss: SteadyState, params: SystemParams,
            rederived_sign: bool = False) -> np.ndarray:
    """4x4 drift matrix of the reduced quadrature dynamics.

    With rederived_sign=True the (0, 2) entry is flipped to -Re(G_bc); see
    the note in the README about this sign.  Default keeps +Re(G_bc).
    """
    p = params
    re_gbc = rm.G_bc.real
    im_gbc = rm.G_bc.imag
    r02 = -re_gbc if rederived_sign else re_gbc
    return np.array([
        [-rm.Gamma_b_minus / 2.0, -rm.Delta_ex_plus, r02, 0.0],
        [rm.Delta_ex_minus, -rm.Gamma_b_plus / 2.0, -im_gbc, 0.0],
        [0.0, 0.0, -p.gamma_m / 2.0, p.omega_m],
        [-im_gbc, -re_gbc, -(p.omega_m + 2.0 * rm.dw_m), -p.gamma_m / 2.0],
    ])


def build_D(rm: ReducedModel, params: SystemParams) -> np.ndarray:
    """4x4 symmetric noise matrix of the reduced quadrature dynamics."""
    p = params
    cross = math.sqrt(rm.gamma_b * rm.gamma_c)
    therm = (p.gamma_m / 2.0) * (2.0 * p.n_th + 1.0)
    return np.array([
        [rm.Gamma_b / 2.0, 0.0, 0.0, 0.0],
        [0.0, rm.Gamma_b / 2.0, 0.0, cross],
        [0.0, 0.0, therm, 0.0],
        [0.0, cross, 0.0, 2.0 * rm.gamma_c + therm],
    ])


def reduced_model(ss: SteadyState, params: SystemParams,
                  rederived_sign: bool = False) -> ReducedModel:
    """Convenience: effective_rates with R and D filled in."""
    rm = effective_rates(ss, params)
    rm.R = build_R(rm, ss, params, rederived_sign=rederived_sign)
    rm.D = build_D(rm, params)
    return rm


def full_model_matrices(ss: SteadyState, params: SystemParams,
                        omega_m_sign: int = -1):
    """Drift/noise pair (R6, D6) for the unreduced three-mode model.

    Quadrature ordering (x_a, y_a, x_b, y_b, x_c, y_c).  omega_m_sign sets
    the sign of the free mechanical evolution, exp(sign*i*omega_m*t); the
    default -1 matches the rotation sense of the reduced model.  Cavity and
    exciton baths are vacuum; the mechanical bath carries n_th.
    """
    p = params
    s = float(omega_m_sign)
    da = ss.delta_a_eff
    dex = ss.delta_ex_eff
    G = p.g0 * math.sqrt(ss.n_s)
    bs2 = ss.b_s ** 2
    kerr_re = 2.0 * p.alpha * bs2.real
    kerr_im = 2.0 * p.alpha * bs2.imag

    R6 = np.array([
        [-p.kappa / 2.0, -da, p.g, 0.0, 2.0 * G, 0.0],
        [da, -p.kappa / 2.0, 0.0, p.g, 0.0, 0.0],
        [-p.g, 0.0, -p.gamma / 2.0 + kerr_im, -(dex + kerr_re), 0.0, 0.0],
        [0.0, -p.g, dex - kerr_re, -p.gamma / 2.0 - kerr_im, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, -p.gamma_m / 2.0, -s * p.omega_m],
        [0.0, -2.0 * G, 0.0, 0.0, s * p.omega_m, -p.gamma_m / 2.0],
    ])
    therm = (p.gamma_m / 2.0) * (2.0 * p.n_th + 1.0)
    D6 = np.diag([p.kappa / 2.0, p.kappa / 2.0,
                  p.gamma / 2.0, p.gamma / 2.0,
                  therm, therm])
    return R6, D6


def dump_matrix_csv(M: np.ndarray, path) -> None:
    """Write a matrix row-major as 17-significant-digit CSV (debug aid)."""
    with open(path, "w") as fh:
        for row in np.atleast_2d(M):
            fh.write(",".join(f"{x:.17g}" for x in row) + "\n")
