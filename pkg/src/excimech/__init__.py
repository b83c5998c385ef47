"""Exciton-mechanics entanglement simulator.

Steady-state logarithmic negativity between a quantum-well exciton mode and
a mechanical mode, coupled dissipatively through a common microcavity.
"""

from .version import __version__

from .errors import (
    AdiabaticRegimeWarning,
    AllUnstable,
    BranchOutOfRange,
    ConflictingDrive,
    ConflictingField,
    DimensionMismatch,
    ExcimechError,
    InvalidConfig,
    MissingField,
    NoConvergence,
    NonPhysicalCovariance,
    NonPhysicalValue,
    NoRoot,
    NotConverged,
    PhysicalityWarning,
    ScanTooCoarseWarning,
    SingularSystem,
    UnstableDrift,
)
from .params import (
    SystemParams,
    build_params,
    photon_energy_from_wavelength_nm,
    pump_amplitude,
    replace_params,
    serialize,
    thermal_occupation,
)
from .steady_state import (
    SteadyState,
    effective_detunings,
    find_roots,
    intensity_residual,
    solve_steady_state,
)
from .reduced import (
    ReducedModel,
    build_D,
    build_R,
    effective_rates,
    full_model_matrices,
    reduced_model,
)
from .linalg import (
    CovarianceMatrix,
    eigenvalues,
    integrate_moments,
    is_stable,
    lyapunov_residual,
    solve_lyapunov,
    symplectic_form,
)
from .entanglement import EntanglementResult, log_negativity, partition
from .sweeps import (
    ARGMAX_COLUMN,
    CSV_COLUMNS,
    CSV_SCHEMA_VERSION,
    SweepPoint,
    SweepResult,
    adiabatic_check,
    csv_rows,
    evaluate_point,
    hybrid_spectrum,
    optimize_over_power,
    paper_config,
    paper_params,
    sweep_detuning,
    sweep_power,
    write_csv,
    write_sidecar,
)
