"""Parameter containers, derived quantities, and config loading.

Every frequency-like quantity is stored internally as an angular rate in
rad/s.  Config files tag dimensioned entries with explicit units and
:func:`load_config` converts them on the way in; nothing downstream rescales.

The cavity frequency-pull coefficient ``G_om`` is stored in rad s^-1 m^-1.
Microwave practice quotes it in "Hz/m" while using it as an angular rate in
every formula; the loader follows that convention by default and offers the
literal cycles/s reading behind an option (see :func:`load_config`).
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, fields, is_dataclass
from pathlib import Path
from typing import Any

try:
    import tomllib
except ImportError:  # Python < 3.11
    import tomli as tomllib

from scipy.constants import G as NEWTON_G
from scipy.constants import hbar
from scipy.constants import k as BOLTZMANN_K

TWO_PI = 2.0 * math.pi

__all__ = [
    "NEWTON_G",
    "CavityParams",
    "ConfigError",
    "DerivedQuantities",
    "NumericalError",
    "EnvironmentParams",
    "GravityDriveParams",
    "MechanicsParams",
    "MembraneParams",
    "ParameterError",
    "ProbeParams",
    "SystemParams",
    "derive",
    "load_config",
    "load_preset",
    "params_hash",
    "phonon_occupancy",
    "prestressed_frequency",
    "preset_path",
    "probe_photon_number",
    "wrap_phase",
    "zero_point_fluctuation",
]


class ParameterError(ValueError):
    """A parameter set is inconsistent or unphysical."""


class ConfigError(ValueError):
    """A config file cannot be interpreted; messages carry the field path."""


class NumericalError(RuntimeError):
    """A numerical procedure failed to converge or lost its bracket."""


def wrap_phase(phi: float) -> float:
    """Map an angle to the interval (-pi, pi]."""
    out = math.remainder(phi, TWO_PI)
    if out <= -math.pi:
        out += TWO_PI
    return out


def _positive(name: str, value: float) -> None:
    if not value > 0.0:
        raise ParameterError(f"{name} must be positive, got {value!r}")


def _nonnegative(name: str, value: float) -> None:
    if not value >= 0.0:
        raise ParameterError(f"{name} must be nonnegative, got {value!r}")


@dataclass(frozen=True)
class MechanicsParams:
    """Test-mass oscillator: mass and bare mode (omega1, gamma1, Q1).

    One of ``gamma1``/``Q1`` may be omitted; the other is filled from
    Q1 = omega1/gamma1.  If both are given they must agree to 1e-9 relative.
    """

    M1: float
    omega1: float
    gamma1: float | None = None
    Q1: float | None = None

    def __post_init__(self) -> None:
        _positive("M1", self.M1)
        _positive("omega1", self.omega1)
        gamma1, q1 = self.gamma1, self.Q1
        if gamma1 is None and q1 is None:
            raise ParameterError("one of gamma1, Q1 is required")
        if gamma1 is None:
            _positive("Q1", q1)
            gamma1 = self.omega1 / q1
        if q1 is None:
            _positive("gamma1", gamma1)
            q1 = self.omega1 / gamma1
        _positive("gamma1", gamma1)
        if abs(q1 * gamma1 - self.omega1) > 1e-9 * self.omega1:
            raise ParameterError(
                f"gamma1 and Q1 disagree: Q1*gamma1 = {q1 * gamma1!r} "
                f"but omega1 = {self.omega1!r}"
            )
        object.__setattr__(self, "gamma1", float(gamma1))
        object.__setattr__(self, "Q1", float(q1))


@dataclass(frozen=True)
class CavityParams:
    """Microwave cavity and pump working point.

    ``delta_bar`` is the effective pump detuning (pump minus pulled cavity
    frequency), negative for red detuning.  ``abar_mag``/``abar_arg`` give the
    steady intracavity field in the frame rotating at the pump.
    """

    kappa: float
    eta_c: float
    delta_bar: float
    G_om: float
    abar_mag: float
    abar_arg: float
    omega_c: float

    def __post_init__(self) -> None:
        _positive("kappa", self.kappa)
        if not 0.0 < self.eta_c <= 1.0:
            raise ParameterError(f"eta_c must lie in (0, 1], got {self.eta_c!r}")
        _positive("G_om", self.G_om)
        _nonnegative("abar_mag", self.abar_mag)
        _positive("omega_c", self.omega_c)


@dataclass(frozen=True)
class GravityDriveParams:
    """Source mass, its separation, and its harmonic motion.

    The model linearizes gravity around the mean separation ``d``; the guard
    ``x_s < 0.1 d`` keeps the quadratic correction below the percent level.
    Set ``allow_large_excursion`` to bypass it knowingly.
    """

    M2: float
    d: float
    x_s: float
    phi_s: float
    G_newton: float = NEWTON_G
    allow_large_excursion: bool = False

    def __post_init__(self) -> None:
        _positive("M2", self.M2)
        _positive("d", self.d)
        _nonnegative("x_s", self.x_s)
        _positive("G_newton", self.G_newton)
        if self.x_s >= 0.1 * self.d and not self.allow_large_excursion:
            raise ParameterError(
                f"x_s = {self.x_s!r} is not small against d = {self.d!r}; "
                "the linearized drive is unreliable "
                "(set allow_large_excursion to proceed anyway)"
            )


@dataclass(frozen=True)
class ProbeParams:
    """Weak probe tone.  ``alpha_p`` is the input amplitude sqrt(P_p/hbar/omega_p).

    Either ``P_p`` or ``alpha_p`` may be omitted; the other is filled.  If both
    are given they must agree to 1e-9 relative.
    """

    omega_p: float
    phi_p: float
    S_add: float = 0.0
    P_p: float | None = None
    alpha_p: float | None = None

    def __post_init__(self) -> None:
        _positive("omega_p", self.omega_p)
        _nonnegative("S_add", self.S_add)
        p_p, alpha_p = self.P_p, self.alpha_p
        if p_p is None and alpha_p is None:
            raise ParameterError("one of P_p, alpha_p is required")
        if p_p is None:
            _nonnegative("alpha_p", alpha_p)
            p_p = alpha_p**2 * hbar * self.omega_p
        if alpha_p is None:
            _nonnegative("P_p", p_p)
            alpha_p = math.sqrt(p_p / (hbar * self.omega_p))
        _nonnegative("P_p", p_p)
        expected = math.sqrt(p_p / (hbar * self.omega_p))
        if abs(alpha_p - expected) > 1e-9 * max(expected, 1.0):
            raise ParameterError(
                f"alpha_p = {alpha_p!r} disagrees with sqrt(P_p/hbar/omega_p) "
                f"= {expected!r}"
            )
        object.__setattr__(self, "P_p", float(p_p))
        object.__setattr__(self, "alpha_p", float(alpha_p))


@dataclass(frozen=True)
class EnvironmentParams:
    """Mode temperature and one-sided external displacement noise (m^2/Hz)."""

    T: float
    S_x_ext: float = 0.0

    def __post_init__(self) -> None:
        _nonnegative("T", self.T)
        _nonnegative("S_x_ext", self.S_x_ext)


@dataclass(frozen=True)
class MembraneParams:
    """Prestressed square membrane carrying a mass (geometry and material)."""

    sigma: float
    rho: float
    side_l: float
    thickness_b: float

    def __post_init__(self) -> None:
        _positive("sigma", self.sigma)
        _positive("rho", self.rho)
        _positive("side_l", self.side_l)
        _positive("thickness_b", self.thickness_b)


@dataclass(frozen=True)
class SystemParams:
    """Full model input: mechanics, cavity, gravity drive, probe, environment."""

    mechanics: MechanicsParams
    cavity: CavityParams
    gravity: GravityDriveParams
    probe: ProbeParams
    environment: EnvironmentParams
    membrane: MembraneParams | None = None


@dataclass(frozen=True)
class DerivedQuantities:
    """Quantities computed from a :class:`SystemParams` by :func:`derive`.

    Attributes
    ----------
    omega1_prime:
        Gravitationally softened mechanical frequency
        sqrt(omega1^2 - 2 G M2 / d^3), rad/s.
    x_zpf:
        Zero-point fluctuation sqrt(hbar / (2 M1 omega1_prime)), m.
    g0, g:
        Single-quantum coupling G_om * x_zpf and its field-enhanced value
        g0 * |abar|, rad/s.
    F_G, F_p:
        Amplitudes of the gravitational drive force k_G * x_s and of the probe
        force on the oscillator at the drive frequency -delta_bar, N.
    r, phi:
        Force ratio F_G/F_p and relative drive phase
        arg(abar) + phi_p - phi_s - pi, wrapped to (-pi, pi].
    phi_fp, phi_G:
        Individual force phases; phi = phi_fp - phi_G up to wrapping.
    k_G:
        Gravitational spring constant 2 G M1 M2 / d^3, N/m.
    n_bar_1:
        Thermal phonon occupancy of the mechanical mode.
    coop:
        Cooperativity 4 g^2 / (kappa gamma1).
    n_bar_p, snr_shot:
        Intracavity probe photon number and its shot-noise limited
        signal-to-noise ratio sqrt(n_bar_p).
    """

    omega1_prime: float
    x_zpf: float
    g0: float
    g: float
    F_G: float
    F_p: float
    r: float
    phi: float
    phi_fp: float
    phi_G: float
    k_G: float
    n_bar_1: float
    coop: float
    n_bar_p: float
    snr_shot: float


def zero_point_fluctuation(M1: float, omega: float) -> float:
    """Ground-state position spread sqrt(hbar / (2 M1 omega)) in metres."""
    _positive("M1", M1)
    _positive("omega", omega)
    return math.sqrt(hbar / (2.0 * M1 * omega))


def phonon_occupancy(omega: float, T: float) -> float:
    """Bose occupancy 1/(exp(hbar omega / kB T) - 1); zero at T = 0."""
    _positive("omega", omega)
    _nonnegative("T", T)
    if T == 0.0:
        return 0.0
    return 1.0 / math.expm1(hbar * omega / (BOLTZMANN_K * T))


def probe_photon_number(probe: ProbeParams, cavity: CavityParams) -> float:
    """Mean intracavity photon number driven by the probe tone alone.

    The photon flux eta_c * P_p / (hbar omega_p) is filtered by the cavity
    line 4 kappa / (kappa^2 + 4 (omega_p - omega_c)^2).  The line factor is
    evaluated with rates in cycles/s (kappa/2pi and the detuning/2pi), the
    convention under which the reference working point sits near 1e2 photons.
    The factor is down by exactly half at |omega_p - omega_c| = kappa/2 in
    either convention.
    """
    kappa_cyc = cavity.kappa / TWO_PI
    det_cyc = (probe.omega_p - cavity.omega_c) / TWO_PI
    line = 4.0 * kappa_cyc / (kappa_cyc**2 + 4.0 * det_cyc**2)
    return cavity.eta_c * (probe.P_p / (hbar * probe.omega_p)) * line


def prestressed_frequency(membrane: MembraneParams) -> float:
    """Fundamental angular frequency 2 pi sqrt(sigma / (2 rho l^2)) of the bare membrane."""
    return TWO_PI * math.sqrt(membrane.sigma / (2.0 * membrane.rho * membrane.side_l**2))


def derive(params: SystemParams) -> DerivedQuantities:
    """Compute all derived quantities for a parameter set.

    Raises
    ------
    ParameterError
        If the gravitational softening exceeds the bare mechanical restoring
        force, or if the probe force vanishes while a gravitational drive is
        present (the force ratio r is then undefined; run the response
        functions with an explicit r override instead).
    """
    mech = params.mechanics
    cav = params.cavity
    grav = params.gravity
    probe = params.probe
    env = params.environment

    softening = 2.0 * grav.G_newton * grav.M2 / grav.d**3
    if softening >= mech.omega1**2:
        raise ParameterError(
            "gravitational softening 2 G M2 / d^3 exceeds omega1^2; "
            "no stable mechanical mode"
        )
    omega1_prime = math.sqrt(mech.omega1**2 - softening)

    x_zpf = zero_point_fluctuation(mech.M1, omega1_prime)
    g0 = cav.G_om * x_zpf
    g = g0 * cav.abar_mag

    k_g = 2.0 * grav.G_newton * mech.M1 * grav.M2 / grav.d**3
    f_g = k_g * grav.x_s
    f_p = (
        4.0
        * hbar
        * cav.G_om
        * cav.abar_mag
        * math.sqrt(cav.eta_c * cav.kappa)
        * probe.alpha_p
        / cav.kappa
    )
    if f_p == 0.0:
        if f_g != 0.0:
            raise ParameterError(
                "probe force amplitude is zero (alpha_p or abar_mag vanishes) "
                "while a gravitational drive is present; the force ratio r is "
                "undefined"
            )
        # Both drives absent: r = 0/0 is taken as 0 (nothing to modulate).
        force_ratio = 0.0
    else:
        force_ratio = f_g / f_p

    n_bar_p = probe_photon_number(probe, cav)
    return DerivedQuantities(
        omega1_prime=omega1_prime,
        x_zpf=x_zpf,
        g0=g0,
        g=g,
        F_G=f_g,
        F_p=f_p,
        r=force_ratio,
        phi=wrap_phase(cav.abar_arg + probe.phi_p - grav.phi_s - math.pi),
        phi_fp=wrap_phase(cav.abar_arg + probe.phi_p),
        phi_G=wrap_phase(grav.phi_s + math.pi),
        k_G=k_g,
        n_bar_1=phonon_occupancy(mech.omega1, env.T),
        coop=4.0 * g**2 / (cav.kappa * mech.gamma1),
        n_bar_p=n_bar_p,
        snr_shot=math.sqrt(n_bar_p),
    )


def params_hash(params: SystemParams) -> str:
    """Stable 16-hex-digit digest of a parameter set.

    Floats are rendered with 17 significant digits, so the digest changes
    exactly when any stored value changes.
    """

    def render(obj: Any, prefix: str, parts: list[str]) -> None:
        if is_dataclass(obj):
            for field in fields(obj):
                render(getattr(obj, field.name), f"{prefix}{field.name}.", parts)
        elif obj is None:
            parts.append(f"{prefix[:-1]}=none")
        elif isinstance(obj, bool):
            parts.append(f"{prefix[:-1]}={str(obj).lower()}")
        elif isinstance(obj, (int, float)):
            parts.append(f"{prefix[:-1]}={float(obj):.17g}")
        else:
            raise TypeError(f"unhashable parameter field {prefix[:-1]}: {type(obj)!r}")

    parts: list[str] = []
    render(params, "", parts)
    digest = hashlib.sha256("\n".join(parts).encode("ascii")).hexdigest()
    return digest[:16]


# Unit tables for config loading.  Frequency-family units convert cycles/s to
# rad/s; "rad/s" passes through.
_ANGULAR = {
    "rad/s": 1.0,
    "Hz": TWO_PI,
    "mHz": TWO_PI * 1e-3,
    "kHz": TWO_PI * 1e3,
    "MHz": TWO_PI * 1e6,
    "GHz": TWO_PI * 1e9,
}
_UNIT_FAMILIES: dict[str, dict[str, float]] = {
    "mass": {"kg": 1.0, "g": 1e-3, "mg": 1e-6, "ug": 1e-9},
    "length": {
        "m": 1.0,
        "mm": 1e-3,
        "um": 1e-6,
        "µm": 1e-6,
        "nm": 1e-9,
        "pm": 1e-12,
        "am": 1e-18,
    },
    "frequency": _ANGULAR,
    "power": {"W": 1.0, "pW": 1e-12, "fW": 1e-15, "aW": 1e-18},
    "temperature": {"K": 1.0, "mK": 1e-3, "uK": 1e-6},
    "phase": {"rad": 1.0, "pi_rad": math.pi},
    "psd": {"m^2/Hz": 1.0},
    "stress": {"Pa": 1.0, "MPa": 1e6, "GPa": 1e9},
    "density": {"kg/m^3": 1.0, "g/cm^3": 1e3},
    "newton_g": {"m^3/kg/s^2": 1.0},
}


def _tagged_value(raw: Any, path: str, family: str, *, g_unit_cycles: bool = False) -> float:
    """Convert a `{value, unit}` table (or bare number where allowed) to SI/rad-s."""
    if family == "bare":
        if isinstance(raw, (int, float)) and not isinstance(raw, bool):
            return float(raw)
        raise ConfigError(f"{path}: expected a bare number, got {raw!r}")
    if family == "phase" and isinstance(raw, (int, float)) and not isinstance(raw, bool):
        return float(raw)  # bare phases are radians
    if not isinstance(raw, dict):
        raise ConfigError(
            f"{path}: expected a table {{ value = ..., unit = \"...\" }}, got {raw!r}"
        )
    unknown = set(raw) - {"value", "unit"}
    if unknown:
        raise ConfigError(f"{path}: unknown keys {sorted(unknown)}")
    if "value" not in raw or "unit" not in raw:
        raise ConfigError(f"{path}: both 'value' and 'unit' are required")
    value, unit = raw["value"], raw["unit"]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{path}: 'value' must be a number, got {value!r}")
    if family == "pull":
        # Frequency pull per displacement.  The quoted "Hz/m" is, by the
        # convention of the source literature, already an angular rate per
        # metre; opt in to the literal cycles/s reading via g_unit_cycles.
        if unit == "rad/s/m":
            return float(value)
        if unit == "Hz/m":
            return float(value) * (TWO_PI if g_unit_cycles else 1.0)
        raise ConfigError(f"{path}: unknown unit {unit!r} for frequency pull")
    table = _UNIT_FAMILIES[family]
    if unit not in table:
        raise ConfigError(
            f"{path}: unknown unit {unit!r}; expected one of {sorted(table)}"
        )
    return float(value) * table[unit]


def _section(data: dict, name: str, required: bool = True) -> dict | None:
    if name not in data:
        if required:
            raise ConfigError(f"missing section [{name}]")
        return None
    if not isinstance(data[name], dict):
        raise ConfigError(f"[{name}] must be a table")
    return data[name]


class _SectionReader:
    """Reads one config section, tracking unknown keys."""

    def __init__(self, name: str, table: dict, g_unit_cycles: bool = False):
        self.name = name
        self.table = table
        self.seen: set[str] = set()
        self.g_unit_cycles = g_unit_cycles

    def get(self, key: str, family: str, default: float | None = None) -> float | None:
        self.seen.add(key)
        if key not in self.table:
            return default
        return _tagged_value(
            self.table[key], f"{self.name}.{key}", family, g_unit_cycles=self.g_unit_cycles
        )

    def require(self, key: str, family: str) -> float:
        value = self.get(key, family)
        if value is None:
            raise ConfigError(f"{self.name}.{key} is required")
        return value

    def get_bool(self, key: str, default: bool = False) -> bool:
        self.seen.add(key)
        if key not in self.table:
            return default
        raw = self.table[key]
        if not isinstance(raw, bool):
            raise ConfigError(f"{self.name}.{key}: expected a boolean, got {raw!r}")
        return raw

    def finish(self) -> None:
        unknown = set(self.table) - self.seen
        if unknown:
            raise ConfigError(f"[{self.name}]: unknown keys {sorted(unknown)}")


def load_config(path: str | Path) -> SystemParams:
    """Load a TOML parameter file into a validated :class:`SystemParams`.

    Dimensioned entries are tables ``{ value = ..., unit = "..." }``; unit
    strings in the Hz family are converted to rad/s.  ``cavity.delta_bar``
    additionally accepts the string ``"sideband_lock"``, which resolves to
    minus the softened mechanical frequency (pump on the lower motional
    sideband).  Option ``options.g_unit_cycles`` switches the "Hz/m" reading
    of ``cavity.G_om`` to the literal cycles/s interpretation.

    Raises
    ------
    ConfigError
        On malformed TOML, unknown keys/units, or missing required fields;
        messages carry the dotted field path.
    ParameterError
        When the numbers themselves are inconsistent (delegated to the
        dataclass validators).
    """
    path = Path(path)
    try:
        with open(path, "rb") as handle:
            data = tomllib.load(handle)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: invalid TOML: {exc}") from exc

    options_table = _section(data, "options", required=False) or {}
    options = _SectionReader("options", options_table)
    g_unit_cycles = options.get_bool("g_unit_cycles", False)
    options.finish()

    known_sections = {"mechanics", "cavity", "gravity", "probe", "environment", "membrane", "options"}
    unknown = set(data) - known_sections
    if unknown:
        raise ConfigError(f"unknown sections {sorted(unknown)}")

    def build(section: str, ctor: Any, **kwargs: Any) -> Any:
        try:
            return ctor(**kwargs)
        except ParameterError as exc:
            raise ConfigError(f"[{section}]: {exc}") from exc

    mech_r = _SectionReader("mechanics", _section(data, "mechanics"))
    mechanics = build(
        "mechanics",
        MechanicsParams,
        M1=mech_r.require("M1", "mass"),
        omega1=mech_r.require("omega1", "frequency"),
        gamma1=mech_r.get("gamma1", "frequency"),
        Q1=mech_r.get("Q1", "bare"),
    )
    mech_r.finish()

    grav_r = _SectionReader("gravity", _section(data, "gravity"))
    gravity = build(
        "gravity",
        GravityDriveParams,
        M2=grav_r.require("M2", "mass"),
        d=grav_r.require("d", "length"),
        x_s=grav_r.require("x_s", "length"),
        phi_s=grav_r.get("phi_s", "phase", 0.0),
        G_newton=grav_r.get("G_newton", "newton_g", NEWTON_G),
        allow_large_excursion=grav_r.get_bool("allow_large_excursion"),
    )
    grav_r.finish()

    cav_table = _section(data, "cavity")
    cav_r = _SectionReader("cavity", cav_table, g_unit_cycles=g_unit_cycles)
    cav_r.seen.add("delta_bar")
    raw_delta = cav_table.get("delta_bar")
    if raw_delta is None:
        raise ConfigError("cavity.delta_bar is required")
    if raw_delta == "sideband_lock":
        softening = 2.0 * gravity.G_newton * gravity.M2 / gravity.d**3
        omega1 = mechanics.omega1
        if softening >= omega1**2:
            raise ConfigError(
                "cavity.delta_bar: sideband_lock needs a stable softened mode"
            )
        delta_bar = -math.sqrt(omega1**2 - softening)
    elif isinstance(raw_delta, str):
        raise ConfigError(
            f"cavity.delta_bar: unknown sentinel {raw_delta!r} "
            "(only \"sideband_lock\" is recognized)"
        )
    else:
        delta_bar = _tagged_value(raw_delta, "cavity.delta_bar", "frequency")
    cavity = build(
        "cavity",
        CavityParams,
        kappa=cav_r.require("kappa", "frequency"),
        eta_c=cav_r.require("eta_c", "bare"),
        delta_bar=delta_bar,
        G_om=cav_r.require("G_om", "pull"),
        abar_mag=cav_r.require("abar_mag", "bare"),
        abar_arg=cav_r.get("abar_arg", "phase", 0.0),
        omega_c=cav_r.require("omega_c", "frequency"),
    )
    cav_r.finish()

    probe_r = _SectionReader("probe", _section(data, "probe"))
    probe = build(
        "probe",
        ProbeParams,
        omega_p=probe_r.require("omega_p", "frequency"),
        phi_p=probe_r.get("phi_p", "phase", 0.0),
        S_add=probe_r.get("S_add", "bare", 0.0),
        P_p=probe_r.get("P_p", "power"),
        alpha_p=probe_r.get("alpha_p", "bare"),
    )
    probe_r.finish()

    env_r = _SectionReader("environment", _section(data, "environment"))
    environment = build(
        "environment",
        EnvironmentParams,
        T=env_r.require("T", "temperature"),
        S_x_ext=env_r.get("S_x_ext", "psd", 0.0),
    )
    env_r.finish()

    membrane = None
    membrane_table = _section(data, "membrane", required=False)
    if membrane_table is not None:
        memb_r = _SectionReader("membrane", membrane_table)
        membrane = build(
            "membrane",
            MembraneParams,
            sigma=memb_r.require("sigma", "stress"),
            rho=memb_r.require("rho", "density"),
            side_l=memb_r.require("side_l", "length"),
            thickness_b=memb_r.require("thickness_b", "length"),
        )
        memb_r.finish()

    return SystemParams(
        mechanics=mechanics,
        cavity=cavity,
        gravity=gravity,
        probe=probe,
        environment=environment,
        membrane=membrane,
    )


def preset_path(name: str) -> Path:
    """Path of a packaged preset config; raises ConfigError if unknown."""
    from importlib.resources import files

    root = files("gravomit").joinpath("presets")
    candidate = root.joinpath(f"{name}.toml")
    if not candidate.is_file():
        available = sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".toml"))
        raise ConfigError(f"unknown preset {name!r}; available: {available}")
    return Path(str(candidate))


def load_preset(name: str = "reference") -> SystemParams:
    """Load a packaged preset parameter set by name."""
    return load_config(preset_path(name))
