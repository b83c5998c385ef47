"""Exception and warning types shared across the package."""


class ExcimechError(Exception):
    """Base class for all errors raised by this package."""


class InvalidConfig(ExcimechError):
    """Config contains an unknown key or is structurally malformed."""


class MissingField(ExcimechError):
    """A required config field was not supplied."""


class NonPhysicalValue(ExcimechError):
    """A parameter value is outside its physical domain (e.g. negative rate)."""


class ConflictingField(ExcimechError):
    """Two mutually exclusive config fields were both supplied."""


class ConflictingDrive(ConflictingField):
    """Both a laser power and a direct pump amplitude were supplied."""


class NoRoot(ExcimechError):
    """The steady-state intensity equation has no root in the scanned range."""


class BranchOutOfRange(ExcimechError):
    """Requested steady-state branch index exceeds the number of roots."""


class NoConvergence(ExcimechError):
    """Eigenvalue iteration failed to converge."""


class NotConverged(ExcimechError):
    """Moment integration reached t_end with a large residual derivative."""


class UnstableDrift(ExcimechError):
    """Lyapunov solve requested for a non-Hurwitz drift matrix."""


class SingularSystem(ExcimechError):
    """Lyapunov system is singular (an eigenvalue pair sums to ~0)."""


class DimensionMismatch(ExcimechError):
    """Matrix has the wrong shape for the requested operation."""


class NonPhysicalCovariance(ExcimechError):
    """Covariance matrix violates physicality beyond numerical tolerance."""


class AllUnstable(ExcimechError):
    """No stable drive power exists in the optimization window."""


class ScanTooCoarseWarning(UserWarning):
    """Adjacent roots closer than the scan resolution; some may be merged."""


class AdiabaticRegimeWarning(UserWarning):
    """kappa <= g: the adiabatic elimination is outside its regime of validity."""


class PhysicalityWarning(UserWarning):
    """Covariance matrix fails the Heisenberg physicality check."""
