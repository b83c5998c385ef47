"""Small dense matrix engine: eigenvalues, stability, Lyapunov steady-state
solve, and an independent moment-ODE integrator used as a cross-check.

All matrices here are at most 6x6 (quadrature space of 2 or 3 bosonic
modes), so dense O(n^3)-or-worse methods are used throughout.
"""

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from .errors import (
    DimensionMismatch,
    NoConvergence,
    NotConverged,
    PhysicalityWarning,
    SingularSystem,
    UnstableDrift,
)

#: relative pivot threshold below which the Lyapunov system counts as singular
SINGULAR_PIVOT_RTOL = 1e-12


@dataclass
class CovarianceMatrix:
    """Real symmetric quadrature covariance matrix, ordering (x1,y1,x2,y2,...).

    Vacuum normalization: each vacuum quadrature variance is 1/2.  The matrix
    is symmetrized on construction; the Heisenberg physicality condition
    M + (i/2)*Omega >= 0 is checked and warned about, not enforced.
    """

    M: np.ndarray
    n: int = field(init=False)

    def __post_init__(self):
        M = np.asarray(self.M, dtype=float)
        if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] % 2 != 0:
            raise DimensionMismatch(f"covariance must be 2n x 2n, got {M.shape}")
        self.n = M.shape[0] // 2
        scale = np.linalg.norm(M)
        if scale > 0 and np.linalg.norm(M - M.T) > 1e-10 * scale:
            warnings.warn("covariance asymmetry above tolerance; symmetrizing",
                          PhysicalityWarning, stacklevel=2)
        self.M = 0.5 * (M + M.T)
        w = np.linalg.eigvalsh(self.M + 0.5j * symplectic_form(self.n))
        if w.min() < -1e-9 * max(scale, 1.0):
            warnings.warn(
                "covariance violates the Heisenberg physicality condition",
                PhysicalityWarning, stacklevel=2)


def symplectic_form(n: int) -> np.ndarray:
    """Standard symplectic form for n modes, ordering (x1,y1,...)."""
    J = np.array([[0.0, 1.0], [-1.0, 0.0]])
    return np.kron(np.eye(n), J)


def eigenvalues(M: np.ndarray) -> np.ndarray:
    """All eigenvalues of a small real matrix as a complex array.

    Sorted by descending imaginary part, then real part, for deterministic
    downstream ordering.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionMismatch(f"square matrix required, got {M.shape}")
    try:
        w = np.linalg.eigvals(M)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(f"eigenvalue iteration failed: {exc}") from exc
    order = np.lexsort((w.real, -w.imag))
    return w[order]


def is_stable(R: np.ndarray):
    """(stable, margin): stable iff every eigenvalue has Re < 0.

    margin is max_i Re(lambda_i); negative for stable matrices.
    """
    w = eigenvalues(R)
    margin = float(w.real.max())
    return margin < 0.0, margin


def solve_lyapunov(R: np.ndarray, D: np.ndarray) -> CovarianceMatrix:
    """Steady-state covariance V solving R V + V R^T = -D.

    The equation is vectorized with a Kronecker sum into a (2n)^2 x (2n)^2
    dense system and solved by LU with partial pivoting; at this size the
    cost is negligible and the solve is exact up to roundoff.
    """
    R = np.asarray(R, dtype=float)
    D = np.asarray(D, dtype=float)
    if R.shape != D.shape or R.ndim != 2 or R.shape[0] != R.shape[1]:
        raise DimensionMismatch(f"shape mismatch: R {R.shape}, D {D.shape}")
    stable, margin = is_stable(R)
    if not stable:
        raise UnstableDrift(f"drift matrix not Hurwitz (margin {margin:.6e})")

    m = R.shape[0]
    A = np.kron(np.eye(m), R) + np.kron(R, np.eye(m))
    try:
        lu, piv = lu_factor(A)
    except np.linalg.LinAlgError as exc:
        raise SingularSystem(str(exc)) from exc
    pivots = np.abs(np.diag(lu))
    scale = np.abs(A).max()
    if pivots.min() < SINGULAR_PIVOT_RTOL * scale:
        raise SingularSystem(
            "Lyapunov system numerically singular "
            f"(pivot ratio {pivots.min() / scale:.3e}); marginally stable drift")
    vec = lu_solve((lu, piv), -D.reshape(-1, order="F"))
    V = vec.reshape(m, m, order="F")
    return CovarianceMatrix(0.5 * (V + V.T))


def lyapunov_residual(R, D, V) -> float:
    """Frobenius norm of R V + V R^T + D."""
    V = V.M if isinstance(V, CovarianceMatrix) else V
    return float(np.linalg.norm(R @ V + V @ R.T + D))


def integrate_moments(R: np.ndarray, D: np.ndarray, V0: np.ndarray,
                      t_end: float, dt: float = None) -> CovarianceMatrix:
    """Integrate dV/dt = R V + V R^T + D with classic RK4 from V0.

    Stops once ||dV/dt|| < 1e-12 ||D|| or at t_end (raising NotConverged in
    the latter case).  dt defaults to 0.01/||R||_2 and may not exceed it.

    The right-hand side is affine in V, so one RK4 step is a fixed affine map
    on vec(V); the map is precomputed and composed by binary squaring, which
    reproduces the step-by-step iteration exactly (up to roundoff) at a tiny
    fraction of the cost for stiff systems.  The iterate is symmetrized at
    every checkpoint; the exact map preserves symmetry.
    """
    R = np.asarray(R, dtype=float)
    D = np.asarray(D, dtype=float)
    V0 = np.asarray(V0, dtype=float)
    if not (R.shape == D.shape == V0.shape) or R.shape[0] != R.shape[1]:
        raise DimensionMismatch("R, D, V0 must be square and same shape")
    stable, margin = is_stable(R)
    if not stable:
        raise UnstableDrift(f"drift matrix not Hurwitz (margin {margin:.6e})")

    norm_R = float(np.linalg.norm(R, 2))
    dt_max = 0.01 / norm_R
    if dt is None:
        dt = dt_max
    if dt > dt_max * (1 + 1e-12):
        raise ValueError(f"dt {dt:.3e} exceeds stability bound {dt_max:.3e}")

    m = R.shape[0]
    K = np.kron(np.eye(m), R) + np.kron(R, np.eye(m))
    d = D.reshape(-1, order="F")
    X = dt * K
    # one RK4 step for v' = K v + d:  v <- P4(X) v + dt*Q3(X) d
    X2 = X @ X
    X3 = X2 @ X
    X4 = X3 @ X
    I = np.eye(m * m)
    M_step = I + X + X2 / 2.0 + X3 / 6.0 + X4 / 24.0
    w_step = dt * ((I + X / 2.0 + X2 / 6.0 + X3 / 24.0) @ d)

    tol = 1e-12 * float(np.linalg.norm(D))
    v = 0.5 * (V0 + V0.T).reshape(-1, order="F")

    def deriv_norm(vv):
        return float(np.linalg.norm(K @ vv + d))

    if deriv_norm(v) <= tol:
        return CovarianceMatrix(v.reshape(m, m, order="F"))

    n_total = max(1, int(math.ceil(t_end / dt)))
    # maps[k] applies 2^k RK4 steps at once; built lazily by squaring
    maps = [(M_step, w_step)]

    def step_map(k):
        while len(maps) <= k:
            Mb, wb = maps[-1]
            maps.append((Mb @ Mb, Mb @ wb + wb))
        return maps[k]

    steps_done = 0
    grow = 0  # exponential ramp-up of block sizes between convergence checks
    while steps_done < n_total:
        remaining = n_total - steps_done
        k = min(grow, remaining.bit_length() - 1)
        Mb, wb = step_map(k)
        v = Mb @ v + wb
        steps_done += 1 << k
        Vs = v.reshape(m, m, order="F")
        v = (0.5 * (Vs + Vs.T)).reshape(-1, order="F")
        if deriv_norm(v) <= tol:
            break
        grow += 1

    if deriv_norm(v) > tol:
        raise NotConverged(
            f"t_end reached with ||dV/dt|| = {deriv_norm(v):.3e} > {tol:.3e}")
    return CovarianceMatrix(v.reshape(m, m, order="F"))
