"""Logarithmic negativity of a bipartite Gaussian state from its 4x4
quadrature covariance matrix (vacuum variance 1/2, ordering x_A,y_A,x_B,y_B).
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DimensionMismatch, NonPhysicalCovariance
from .linalg import CovarianceMatrix

#: relative tolerance for clamping tiny negative discriminants/eigenvalues
CLAMP_RTOL = 1e-9


@dataclass(frozen=True)
class EntanglementResult:
    E_N: float                 # logarithmic negativity, natural-log convention
    chi: float                 # lowest symplectic eigenvalue of the partial transpose
    sigma: float               # det V_A + det V_B - 2 det V_AB
    detV: float                # determinant of the full covariance matrix
    stable: bool = True
    eig_R: Optional[np.ndarray] = None  # drift eigenvalues, for diagnostics


def partition(V):
    """Split a 4x4 covariance into (V_A, V_B, V_AB) blocks."""
    M = V.M if isinstance(V, CovarianceMatrix) else np.asarray(V, dtype=float)
    if M.shape != (4, 4):
        raise DimensionMismatch(f"4x4 covariance required, got {M.shape}")
    return M[:2, :2], M[2:, 2:], M[:2, 2:]


def log_negativity(V, stable: bool = True, eig_R=None) -> EntanglementResult:
    """E_N = max(0, -ln 2*chi) with chi the lowest symplectic eigenvalue of
    the partially transposed covariance matrix.

    chi is computed from the symplectic invariants:
    sigma = det V_A + det V_B - 2 det V_AB and
    chi = 2^{-1/2} * sqrt(sigma - sqrt(sigma^2 - 4 det V)).
    """
    M = V.M if isinstance(V, CovarianceMatrix) else np.asarray(V, dtype=float)
    VA, VB, VAB = partition(M)
    detV = float(np.linalg.det(M))
    sigma = float(np.linalg.det(VA) + np.linalg.det(VB) - 2.0 * np.linalg.det(VAB))

    disc = sigma * sigma - 4.0 * detV
    if disc < 0.0:
        if disc >= -CLAMP_RTOL * sigma * sigma:
            disc = 0.0
        else:
            raise NonPhysicalCovariance(
                f"sigma^2 - 4 det V = {disc:.6e} negative beyond tolerance")
    chi_sq = 0.5 * (sigma - math.sqrt(disc))
    if chi_sq < 0.0:
        if chi_sq >= -CLAMP_RTOL * abs(sigma):
            chi_sq = 0.0
        else:
            raise NonPhysicalCovariance(
                f"squared symplectic eigenvalue {chi_sq:.6e} negative beyond tolerance")
    chi = math.sqrt(chi_sq)
    if chi <= 0.0:
        raise NonPhysicalCovariance("vanishing symplectic eigenvalue")
    E_N = max(0.0, -math.log(2.0 * chi))
    return EntanglementResult(E_N=E_N, chi=chi, sigma=sigma, detV=detV,
                              stable=stable, eig_R=eig_R)
