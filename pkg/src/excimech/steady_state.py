"""Classical mean-field steady state of the driven cavity/exciton/mechanics
system, with multi-root (bistability) detection and branch selection.

The exciton intensity I_b = |b_s|^2 obeys a scalar nonlinear equation whose
roots are located by a log-spaced scan plus bisection; the mean fields follow
in closed form from the chosen root.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import BranchOutOfRange, NoRoot, ScanTooCoarseWarning
from .params import SystemParams

#: number of points in the root-bracketing scan
N_SCAN = 3000
#: relative tolerance of the bisection refinement
ROOT_RTOL = 1e-12


@dataclass(frozen=True)
class SteadyState:
    """Mean-field steady state on a chosen intensity branch."""

    I_b: float            # steady exciton number |b_s|^2
    a_s: complex          # cavity mean field (phase-rotated: a_s = -i|a_s|)
    b_s: complex          # exciton mean field (same global phase applied)
    c_s: complex          # mechanical mean field
    n_s: float            # mean cavity photon number |a_s|^2
    delta_a_eff: float    # intensity-dependent cavity detuning [rad/s]
    delta_ex_eff: float   # intensity-dependent exciton detuning [rad/s]
    branch: int           # index among ascending real nonnegative roots
    n_roots: int          # total roots found


def effective_detunings(I_b, params: SystemParams):
    """Intensity-dependent detunings (delta_a_eff, delta_ex_eff).

    The exciton detuning shifts linearly in I_b through the Kerr term; the
    cavity detuning picks up a mechanically mediated shift quadratic in I_b.
    Accepts scalar or ndarray I_b.
    """
    p = params
    dex = p.delta_ex + 2.0 * p.alpha * I_b
    mech = 2.0 * p.g0 ** 2 * p.omega_m / (p.omega_m ** 2 + (p.gamma_m / 2.0) ** 2)
    if p.g == 0.0:
        # decoupled exciton: no intensity is driven, so no shift either
        da = p.delta_a + 0.0 * I_b
    else:
        da = p.delta_a - mech * (((p.gamma / 2.0) ** 2 + dex ** 2) / p.g ** 2) * I_b ** 2
    return da, dex


def intensity_residual(I_b, params: SystemParams):
    """Residual of the steady-state intensity equation; zero at a solution.

    Accepts scalar or ndarray I_b (elementwise evaluation).
    """
    p = params
    da, dex = effective_detunings(I_b, params)
    re = p.kappa * p.gamma / 4.0 + p.g ** 2 - da * dex
    im = p.kappa * dex / 2.0 + p.gamma * da / 2.0
    return (I_b / p.g ** 2) * (re ** 2 + im ** 2) - p.pump_amplitude ** 2


def _default_I_max(params: SystemParams) -> float:
    """Upper scan bound: 10x the lossless linear-response intensity scale."""
    p = params
    lin = p.g ** 2 * p.pump_amplitude ** 2 / (p.kappa * p.gamma / 4.0 + p.g ** 2) ** 2
    return 10.0 * lin + 1.0


def _bisect(f, lo, hi, flo):
    """Refine a bracketed sign change to relative tolerance ROOT_RTOL."""
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if hi - lo <= ROOT_RTOL * mid + 1e-300:
            break
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm < 0.0) == (flo < 0.0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def find_roots(params: SystemParams, I_max=None):
    """All nonnegative roots of the intensity equation, ascending.

    Sign changes are bracketed on a log-spaced scan of at least N_SCAN points
    over (0, I_max] (the origin is included explicitly) and refined by
    bisection.  The scan range is expanded automatically if the residual is
    still negative at I_max.
    """
    p = params
    if p.pump_amplitude == 0.0:
        return [0.0]
    if p.g == 0.0:
        raise NoRoot("exciton intensity equation undefined for g = 0 with drive")
    if I_max is None:
        I_max = _default_I_max(params)
    if not I_max > 0.0:
        raise NoRoot(f"I_max must be > 0, got {I_max!r}")

    f = lambda x: intensity_residual(x, params)
    for _ in range(60):
        if f(I_max) >= 0.0:
            break
        I_max *= 4.0
    else:
        raise NoRoot("intensity residual negative up to the expanded scan bound")

    grid = np.concatenate(([0.0], np.geomspace(I_max * 1e-14, I_max, N_SCAN)))
    vals = intensity_residual(grid, params)

    roots = []
    for i in range(len(grid) - 1):
        flo, fhi = vals[i], vals[i + 1]
        if flo == 0.0:
            if not roots or grid[i] > roots[-1] * (1 + 10 * ROOT_RTOL):
                roots.append(grid[i])
        elif (flo < 0.0) != (fhi < 0.0):
            roots.append(_bisect(f, grid[i], grid[i + 1], flo))
    if vals[-1] == 0.0:
        roots.append(grid[-1])

    if not roots:
        raise NoRoot("no sign change of the intensity residual in [0, I_max]")

    # log-spaced cell width near intensity b is roughly b*(ratio-1)
    cell = math.log(1e14) / (N_SCAN - 1)
    for a, b in zip(roots, roots[1:]):
        # adjacent roots separated by less than ~2 scan cells may hide a
        # third root between them
        if b - a < 2.0 * b * cell:
            warnings.warn(
                "adjacent intensity roots closer than the scan resolution",
                ScanTooCoarseWarning,
                stacklevel=2,
            )
            break
    return sorted(roots)


def solve_steady_state(params: SystemParams, branch_policy="lowest",
                       I_max=None) -> SteadyState:
    """Mean fields on the selected intensity branch.

    branch_policy: "lowest" (default; the branch continuously connected to
    the undriven state), "highest", or an integer index into the ascending
    root list.  A single global phase is applied to (a_s, b_s) so that
    a_s = -i|a_s|, preserving all moduli and the relative phase.
    """
    p = params
    roots = find_roots(params, I_max=I_max)
    if branch_policy == "lowest":
        idx = 0
    elif branch_policy == "highest":
        idx = len(roots) - 1
    else:
        idx = int(branch_policy)
        if not (0 <= idx < len(roots)):
            raise BranchOutOfRange(
                f"branch index {idx} out of range for {len(roots)} roots")
    I_b = roots[idx]

    da, dex = effective_detunings(I_b, params)
    if p.pump_amplitude == 0.0:
        return SteadyState(I_b=0.0, a_s=0j, b_s=0j, c_s=0j, n_s=0.0,
                           delta_a_eff=da, delta_ex_eff=dex,
                           branch=idx, n_roots=len(roots))

    b_s = -p.g * p.pump_amplitude / (
        p.kappa * p.gamma / 4.0 + p.g ** 2 - da * dex
        + 1j * (p.kappa * dex / 2.0 + p.gamma * da / 2.0))
    a_s = 0j if p.g == 0.0 else -(p.gamma / 2.0 + 1j * dex) / p.g * b_s
    n_s = abs(a_s) ** 2
    c_s = 1j * p.g0 * n_s / (p.gamma_m / 2.0 + 1j * p.omega_m)

    if abs(a_s) > 0.0:
        phase = -1j * abs(a_s) / a_s
        a_s = a_s * phase
        b_s = b_s * phase

    return SteadyState(I_b=I_b, a_s=a_s, b_s=b_s, c_s=c_s, n_s=n_s,
                       delta_a_eff=da, delta_ex_eff=dex,
                       branch=idx, n_roots=len(roots))
