"""Physical parameters, unit conversions, and derived drive quantities.

Canonical internal units: rad/s for frequencies and couplings, 1/s for decay
rates.  The config layer accepts human units (GHz, ps, ns, uW, K) and converts
once; everything downstream works with `SystemParams` only.
"""

import math
import warnings
from dataclasses import dataclass, fields

from scipy.constants import hbar, k as k_B, h, c

from .errors import (
    AdiabaticRegimeWarning,
    ConflictingDrive,
    ConflictingField,
    InvalidConfig,
    MissingField,
    NonPhysicalValue,
)

# Default pump wavelength used to convert laser power to a pump amplitude.
# Chosen near a typical GaAs quantum-well exciton line; overridable via the
# `pump_wavelength_nm` / `pump_photon_energy_J` config keys.
DEFAULT_PUMP_WAVELENGTH_NM = 777.0

# Default Kerr nonlinearity as a fraction of the exciton-cavity coupling g.
DEFAULT_ALPHA_OVER_G = 1e-9


@dataclass(frozen=True)
class SystemParams:
    """All physical inputs in canonical angular-frequency units.

    Detunings are laser-referenced: delta_a = omega_p - omega_a and
    delta_ex = omega_p - omega_ex, so a negative value means the drive is
    red-detuned below the mode resonance.
    """

    omega_m: float      # mechanical angular frequency [rad/s]
    kappa: float        # microcavity amplitude damping rate [1/s]
    gamma: float        # exciton spontaneous emission rate [1/s]
    gamma_m: float      # mechanical damping rate [1/s]
    g: float            # exciton-cavity coupling [rad/s]
    g0: float           # single-photon optomechanical coupling [rad/s]
    alpha: float        # exciton-exciton (Kerr) nonlinearity [rad/s]
    delta_a: float      # cavity-drive detuning [rad/s]
    delta_ex: float     # exciton-drive detuning [rad/s]
    pump_amplitude: float  # pump amplitude epsilon_p [1/s]
    n_th: float         # mean thermal phonon occupation [dimensionless]

    def __post_init__(self):
        for name in ("omega_m", "kappa", "gamma", "gamma_m"):
            v = getattr(self, name)
            if not (v > 0.0) or not math.isfinite(v):
                raise NonPhysicalValue(f"{name} must be strictly positive, got {v!r}")
        for name in ("g", "g0", "alpha", "pump_amplitude", "n_th"):
            v = getattr(self, name)
            if v < 0.0 or not math.isfinite(v):
                raise NonPhysicalValue(f"{name} must be >= 0, got {v!r}")
        for name in ("delta_a", "delta_ex"):
            if not math.isfinite(getattr(self, name)):
                raise NonPhysicalValue(f"{name} must be finite")
        if self.kappa <= self.g:
            warnings.warn(
                "kappa <= g: adiabatic elimination of the cavity is outside "
                "its regime of validity",
                AdiabaticRegimeWarning,
                stacklevel=2,
            )

    @property
    def adiabatic_regime(self) -> bool:
        return self.kappa > self.g


def pump_amplitude(power: float, photon_energy: float, kappa: float) -> float:
    """Pump amplitude epsilon_p = sqrt(kappa * P / photon_energy) [1/s].

    `power` in W, `photon_energy` in J, `kappa` in 1/s.  P = 0 is allowed.
    """
    if power < 0.0:
        raise NonPhysicalValue(f"power must be >= 0, got {power!r}")
    if photon_energy <= 0.0 or kappa <= 0.0:
        raise NonPhysicalValue("photon_energy and kappa must be > 0")
    return math.sqrt(kappa * power / photon_energy)


def thermal_occupation(T: float, omega_m: float) -> float:
    """Bose-Einstein occupation n_th = 1/(exp(hbar*omega_m/kB*T) - 1)."""
    if T <= 0.0:
        raise NonPhysicalValue(f"temperature must be > 0, got {T!r}")
    if omega_m <= 0.0:
        raise NonPhysicalValue(f"omega_m must be > 0, got {omega_m!r}")
    x = hbar * omega_m / (k_B * T)
    if x > 700.0:
        # expm1 would overflow; the occupation is exp(-x) to all significance
        return math.exp(-x)
    return 1.0 / math.expm1(x)


def photon_energy_from_wavelength_nm(wavelength_nm: float) -> float:
    """Photon energy h*c/lambda [J] for a vacuum wavelength in nm."""
    if wavelength_nm <= 0.0:
        raise NonPhysicalValue("wavelength must be > 0")
    return h * c / (wavelength_nm * 1e-9)


_CANONICAL_KEYS = (
    "omega_m", "kappa", "gamma", "gamma_m", "g", "g0", "alpha",
    "delta_a", "delta_ex", "pump_amplitude", "n_th",
)

_KNOWN_KEYS = set(_CANONICAL_KEYS) | {
    "omega_m_over_2pi_GHz", "kappa_inv_ps", "gamma_inv_ns", "gamma_m_inv_ns",
    "g_over_2pi_GHz", "g0_over_2pi_MHz", "alpha_over_g",
    "delta_over_omega_m", "delta_a_over_omega_m", "delta_ex_over_omega_m",
    "power_uW", "pump_wavelength_nm", "pump_photon_energy_J",
    "temperature_K",
}


def _pick(cfg, canonical, human):
    """Return ('canonical'|'human'|None, value); reject both-given."""
    has_c = canonical in cfg
    has_h = human in cfg
    if has_c and has_h:
        raise ConflictingField(f"both {canonical!r} and {human!r} given")
    if has_c:
        return "canonical", cfg[canonical]
    if has_h:
        return "human", cfg[human]
    return None, None


def build_params(config) -> SystemParams:
    """Build canonical SystemParams from a flat human-units config mapping.

    Accepted keys (canonical | human):
      omega_m [rad/s]        | omega_m_over_2pi_GHz
      kappa [1/s]            | kappa_inv_ps           (kappa = 1/(x ps))
      gamma [1/s]            | gamma_inv_ns
      gamma_m [1/s]          | gamma_m_inv_ns
      g [rad/s]              | g_over_2pi_GHz
      g0 [rad/s]             | g0_over_2pi_MHz
      alpha [rad/s]          | alpha_over_g           (default 1e-9)
      delta_a, delta_ex      | delta_over_omega_m     (red-detuning magnitude:
                                sets delta_a = delta_ex = -x*omega_m, i.e. the
                                drive sits x*omega_m below both resonances)
                             | delta_a_over_omega_m, delta_ex_over_omega_m
                                (literal signed multipliers of omega_m)
      pump_amplitude [1/s]   | power_uW (+ pump_wavelength_nm, default 777,
                                or pump_photon_energy_J)
      n_th                   | temperature_K
    """
    cfg = dict(config)
    unknown = set(cfg) - _KNOWN_KEYS
    if unknown:
        raise InvalidConfig(f"unknown config keys: {sorted(unknown)}")

    def require(kind, value, field):
        if kind is None:
            raise MissingField(f"config missing required field {field!r}")
        return float(value)

    kind, v = _pick(cfg, "omega_m", "omega_m_over_2pi_GHz")
    omega_m = require(kind, v, "omega_m") if kind == "canonical" else \
        2.0 * math.pi * require(kind, v, "omega_m") * 1e9

    kind, v = _pick(cfg, "kappa", "kappa_inv_ps")
    if kind == "human" and float(v) <= 0.0:
        raise NonPhysicalValue("kappa_inv_ps must be > 0")
    kappa = require(kind, v, "kappa") if kind == "canonical" else \
        1.0 / (require(kind, v, "kappa") * 1e-12)

    kind, v = _pick(cfg, "gamma", "gamma_inv_ns")
    if kind == "human" and float(v) <= 0.0:
        raise NonPhysicalValue("gamma_inv_ns must be > 0")
    gamma = require(kind, v, "gamma") if kind == "canonical" else \
        1.0 / (require(kind, v, "gamma") * 1e-9)

    kind, v = _pick(cfg, "gamma_m", "gamma_m_inv_ns")
    if kind == "human" and float(v) <= 0.0:
        raise NonPhysicalValue("gamma_m_inv_ns must be > 0")
    gamma_m = require(kind, v, "gamma_m") if kind == "canonical" else \
        1.0 / (require(kind, v, "gamma_m") * 1e-9)

    kind, v = _pick(cfg, "g", "g_over_2pi_GHz")
    g = require(kind, v, "g") if kind == "canonical" else \
        2.0 * math.pi * require(kind, v, "g") * 1e9

    kind, v = _pick(cfg, "g0", "g0_over_2pi_MHz")
    g0 = require(kind, v, "g0") if kind == "canonical" else \
        2.0 * math.pi * require(kind, v, "g0") * 1e6

    kind, v = _pick(cfg, "alpha", "alpha_over_g")
    if kind is None:
        alpha = DEFAULT_ALPHA_OVER_G * g
    elif kind == "canonical":
        alpha = float(v)
    else:
        alpha = float(v) * g

    # Detunings.
    if "delta_over_omega_m" in cfg:
        if "delta_a" in cfg or "delta_ex" in cfg or \
                "delta_a_over_omega_m" in cfg or "delta_ex_over_omega_m" in cfg:
            raise ConflictingField(
                "delta_over_omega_m conflicts with per-mode detuning keys")
        x = float(cfg["delta_over_omega_m"])
        if x < 0.0:
            raise NonPhysicalValue(
                "delta_over_omega_m is a red-detuning magnitude and must be >= 0")
        delta_a = delta_ex = -x * omega_m
    else:
        kind, v = _pick(cfg, "delta_a", "delta_a_over_omega_m")
        delta_a = require(kind, v, "delta_a") if kind == "canonical" else \
            require(kind, v, "delta_a") * omega_m
        kind, v = _pick(cfg, "delta_ex", "delta_ex_over_omega_m")
        delta_ex = require(kind, v, "delta_ex") if kind == "canonical" else \
            require(kind, v, "delta_ex") * omega_m

    # Drive.
    if "pump_amplitude" in cfg and "power_uW" in cfg:
        raise ConflictingDrive("both pump_amplitude and power_uW given")
    if "pump_amplitude" in cfg:
        eps_p = float(cfg["pump_amplitude"])
    elif "power_uW" in cfg:
        if "pump_photon_energy_J" in cfg and "pump_wavelength_nm" in cfg:
            raise ConflictingField(
                "both pump_photon_energy_J and pump_wavelength_nm given")
        if "pump_photon_energy_J" in cfg:
            e_ph = float(cfg["pump_photon_energy_J"])
        else:
            lam = float(cfg.get("pump_wavelength_nm", DEFAULT_PUMP_WAVELENGTH_NM))
            e_ph = photon_energy_from_wavelength_nm(lam)
        eps_p = pump_amplitude(float(cfg["power_uW"]) * 1e-6, e_ph, kappa)
    else:
        raise MissingField("config missing required field 'pump_amplitude' or 'power_uW'")

    # Thermal occupation.
    if "n_th" in cfg and "temperature_K" in cfg:
        raise ConflictingField("both n_th and temperature_K given")
    if "n_th" in cfg:
        n_th = float(cfg["n_th"])
    elif "temperature_K" in cfg:
        n_th = thermal_occupation(float(cfg["temperature_K"]), omega_m)
    else:
        raise MissingField("config missing required field 'n_th' or 'temperature_K'")

    return SystemParams(
        omega_m=omega_m, kappa=kappa, gamma=gamma, gamma_m=gamma_m,
        g=g, g0=g0, alpha=alpha, delta_a=delta_a, delta_ex=delta_ex,
        pump_amplitude=eps_p, n_th=n_th,
    )


def serialize(params: SystemParams) -> dict:
    """Canonical key-value form; build_params(serialize(p)) round-trips."""
    return {f.name: getattr(params, f.name) for f in fields(params)}


def replace_params(params: SystemParams, **kwargs) -> SystemParams:
    """Return a copy with the given canonical fields replaced."""
    d = serialize(params)
    d.update(kwargs)
    return SystemParams(**d)
