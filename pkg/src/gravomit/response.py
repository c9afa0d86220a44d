"""Analytic probe transmission of the gravitationally driven cavity.

``omega`` is the beat frequency of the probe against the pump (the sideband
frequency); the pump sits at effective detuning ``delta_bar`` from the pulled
cavity resonance, negative for red detuning.  At the reference working point
``delta_bar = -omega1_prime`` and ``kappa = omega1``: the system is far from
the resolved-sideband limit, all counter-rotating terms are kept, and
``|t_p|^2`` may exceed unity near the transparency window.  No passivity is
assumed anywhere.

The loaded (source mass present) mechanical response is centred on the
softened frequency ``omega1_prime``; the unloaded response reverts the centre
to ``omega1`` while every other coefficient, including the shared numerator
weight ``2 omega1_prime g^2``, stays fixed.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from gravomit.params import (
    DerivedQuantities,
    ParameterError,
    SystemParams,
    params_hash,
    wrap_phase,
)

__all__ = [
    "ComplexSpectrum",
    "ResponsePoint",
    "SpectrumKind",
    "backaction_f",
    "default_grid",
    "effective_linewidth",
    "intracavity_response",
    "lorentzian_fwhm",
    "lorentzian_peak_offset",
    "lorentzian_power",
    "lorentzian_transmission",
    "spectrum",
    "susceptibility",
    "transmission_driven",
    "transmission_undriven",
    "transmission_unloaded",
    "zoom_grid",
]


class SpectrumKind(enum.Enum):
    DRIVEN = "driven"
    UNDRIVEN = "undriven"
    UNLOADED = "unloaded"
    LORENTZIAN_DRIVEN = "lorentzian_driven"
    LORENTZIAN_UNDRIVEN = "lorentzian_undriven"
    ORACLE = "oracle"


@dataclass(frozen=True, eq=False)
class ComplexSpectrum:
    """A transmission spectrum on a frequency grid."""

    omega_grid: np.ndarray
    values: np.ndarray
    kind: SpectrumKind
    params_hash: str


@dataclass(frozen=True)
class ResponsePoint:
    """Intracavity response at one frequency: susceptibility, radiation-
    pressure feedback, and the probe-frequency field amplitude."""

    omega: float
    chi: complex
    f: complex
    delta_a_amp: complex


def _coupling_weight(derived: DerivedQuantities) -> float:
    # 2 omega1' g^2 == hbar G_om^2 |abar|^2 / M1; evaluated once so the
    # loaded and unloaded responses share the identical numerator.
    return 2.0 * derived.omega1_prime * derived.g**2


def _mech_denom(omega, omega_res: float, gamma1: float):
    return omega_res**2 - omega**2 - 1j * omega * gamma1


def _cavity_e(omega, delta_bar: float, kappa: float):
    return 1j * (delta_bar - omega) + kappa / 2.0


def _cavity_d0(omega, delta_bar: float, kappa: float):
    return -1j * (delta_bar + omega) + kappa / 2.0


def _resolve_drive(derived: DerivedQuantities, r: float | None, phi: float | None) -> complex:
    r_eff = derived.r if r is None else r
    phi_eff = derived.phi if phi is None else phi
    return r_eff * np.exp(1j * phi_eff)


def susceptibility(omega, params: SystemParams, derived: DerivedQuantities, *, loaded: bool = True):
    """Mechanical susceptibility chi(omega) = 1 / (M1 (w_r^2 - w^2 - i w gamma1)).

    ``loaded`` selects the resonance w_r: the softened omega1_prime (source
    mass present) or the bare omega1.
    """
    omega = np.asarray(omega, dtype=float)
    w_res = derived.omega1_prime if loaded else params.mechanics.omega1
    out = 1.0 / (params.mechanics.M1 * _mech_denom(omega, w_res, params.mechanics.gamma1))
    out = np.asarray(out)
    return out if out.ndim else complex(out)


def _backaction(omega: np.ndarray, params: SystemParams, derived: DerivedQuantities, loaded: bool) -> np.ndarray:
    cav = params.cavity
    w_res = derived.omega1_prime if loaded else params.mechanics.omega1
    return _coupling_weight(derived) / (
        _mech_denom(omega, w_res, params.mechanics.gamma1)
        * _cavity_e(omega, cav.delta_bar, cav.kappa)
    )


def backaction_f(omega, params: SystemParams, derived: DerivedQuantities, *, loaded: bool = True):
    """Radiation-pressure feedback f(omega) = hbar G_om^2 |abar|^2 chi(omega) / E(omega).

    Dimensionless; E(omega) = i(delta_bar - omega) + kappa/2 is the cavity
    response of the co-rotating sideband.
    """
    omega = np.asarray(omega, dtype=float)
    out = _backaction(omega, params, derived, loaded)
    out = np.asarray(out)
    return out if out.ndim else complex(out)


def _denominator(omega, params: SystemParams, f_val):
    cav = params.cavity
    return _cavity_d0(omega, cav.delta_bar, cav.kappa) + 2.0 * cav.delta_bar * f_val


def transmission_undriven(omega, params: SystemParams, derived: DerivedQuantities):
    """Probe transmission t_p0 with the source mass loaded but at rest."""
    omega = np.asarray(omega, dtype=float)
    cav = params.cavity
    f_val = _backaction(omega, params, derived, True)
    out = 1.0 - (1.0 + 1j * f_val) * cav.eta_c * cav.kappa / _denominator(omega, params, f_val)
    out = np.asarray(out)
    return out if out.ndim else complex(out)


def transmission_driven(
    omega,
    params: SystemParams,
    derived: DerivedQuantities,
    *,
    r: float | None = None,
    phi: float | None = None,
):
    """Probe transmission t_pG with the source mass vibrating.

    The gravitational drive enters through the force ratio r = F_G/F_p and
    relative phase phi; pass ``r``/``phi`` to override the derived values
    (``r = 0`` reproduces :func:`transmission_undriven` identically).
    """
    omega = np.asarray(omega, dtype=float)
    cav = params.cavity
    f_val = _backaction(omega, params, derived, True)
    drive = _resolve_drive(derived, r, phi)
    sideband = (2.0 / cav.kappa) * (1j * cav.delta_bar - 1j * omega + cav.kappa / 2.0)
    numerator = 1.0 + 1j * f_val * (1.0 + drive * sideband)
    out = 1.0 - numerator * cav.eta_c * cav.kappa / _denominator(omega, params, f_val)
    out = np.asarray(out)
    return out if out.ndim else complex(out)


def transmission_unloaded(omega, params: SystemParams, derived: DerivedQuantities):
    """Probe transmission with the source mass removed entirely.

    Only the mechanical resonance reverts omega1_prime -> omega1; the pump
    lock, the cavity terms, and the shared numerator weight are unchanged.
    """
    omega = np.asarray(omega, dtype=float)
    cav = params.cavity
    f_val = _backaction(omega, params, derived, False)
    out = 1.0 - (1.0 + 1j * f_val) * cav.eta_c * cav.kappa / _denominator(omega, params, f_val)
    out = np.asarray(out)
    return out if out.ndim else complex(out)


def intracavity_response(
    omega: float,
    params: SystemParams,
    derived: DerivedQuantities,
    *,
    r: float | None = None,
    phi: float | None = None,
) -> ResponsePoint:
    """Intracavity field amplitude at the probe frequency, with its building
    blocks chi(omega) and f(omega).

    ``delta_a_amp`` is the coefficient of exp(-i omega t) in the lab-frame
    linearized field, combining the probe drive and the gravitational drive;
    it satisfies t_pG = 1 - sqrt(eta_c kappa) delta_a_amp / (alpha_p
    exp(-i phi_p)).
    """
    cav = params.cavity
    mech = params.mechanics
    grav = params.gravity
    probe = params.probe
    chi = susceptibility(omega, params, derived)
    f_val = backaction_f(omega, params, derived)
    d_val = _denominator(np.asarray(omega, dtype=float), params, f_val)

    b_coeff = (1.0 + 1j * f_val) / d_val
    m_chi = mech.M1 * chi
    b_grav = 0.5j * cav.G_om * cav.abar_mag * m_chi / d_val

    probe_amp = (
        math.sqrt(cav.eta_c * cav.kappa)
        * probe.alpha_p
        * np.exp(-1j * (probe.phi_p + cav.abar_arg))
    )
    r_eff = derived.r if r is None else r
    phi_eff = derived.phi if phi is None else phi
    # Drive acceleration amplitude consistent with the (possibly overridden)
    # force ratio; its phase keeps phi = arg(abar) + phi_p - phi_s - pi.
    phi_s_eff = wrap_phase(cav.abar_arg + probe.phi_p - math.pi - phi_eff)
    grav_amp = -(r_eff * derived.F_p / mech.M1) * np.exp(-1j * phi_s_eff)

    amp = np.exp(1j * cav.abar_arg) * (b_coeff * probe_amp + b_grav * grav_amp)
    return ResponsePoint(omega=float(omega), chi=complex(chi), f=complex(f_val), delta_a_amp=complex(amp))


def _require_sideband_lock(params: SystemParams, derived: DerivedQuantities) -> None:
    cav = params.cavity
    if abs(cav.eta_c - 0.5) > 1e-12:
        raise ParameterError(
            f"narrow-window form needs critical coupling eta_c = 1/2, got {cav.eta_c!r}"
        )
    if abs(cav.delta_bar + derived.omega1_prime) > 1e-9 * derived.omega1_prime:
        raise ParameterError(
            "narrow-window form needs the pump on the lower motional sideband "
            f"(delta_bar = -omega1_prime), got delta_bar = {cav.delta_bar!r}"
        )


def lorentzian_transmission(
    omega,
    params: SystemParams,
    derived: DerivedQuantities,
    *,
    driven: bool,
    r: float | None = None,
    phi: float | None = None,
):
    """First-order narrow-window form of t_p around the transparency window.

    Valid for eta_c = 1/2 with the pump on the lower motional sideband
    (raises :class:`ParameterError` otherwise); accurate for
    |omega - omega1_prime| small against the window width.
    """
    _require_sideband_lock(params, derived)
    omega = np.asarray(omega, dtype=float)
    cav = params.cavity
    g2 = derived.g**2
    w1p = derived.omega1_prime
    gamma1 = params.mechanics.gamma1
    kappa = cav.kappa
    dp = omega - w1p
    z1 = 4.0 * g2 + kappa * gamma1 + 1j * kappa**2 * gamma1 / (4.0 * w1p)
    z2 = kappa**2 / (2.0 * w1p) - 2j * kappa
    front = 1.0 + _resolve_drive(derived, r, phi) if driven else 1.0
    out = 4.0 * g2 * (1.0 + 1j * kappa / (4.0 * w1p)) * front / (z1 + z2 * dp)
    out = np.asarray(out)
    return out if out.ndim else complex(out)


def lorentzian_power(
    omega,
    params: SystemParams,
    derived: DerivedQuantities,
    *,
    driven: bool,
    r: float | None = None,
    phi: float | None = None,
):
    """Closed Lorentzian for |t_p|^2 around the window (same validity as
    :func:`lorentzian_transmission`)."""
    _require_sideband_lock(params, derived)
    omega = np.asarray(omega, dtype=float)
    kappa = params.cavity.kappa
    g2 = derived.g**2
    w1p = derived.omega1_prime
    sideband_sq = 1.0 + kappa**2 / (16.0 * w1p**2)
    width_term = 4.0 * g2 / sideband_sq + kappa * params.mechanics.gamma1
    offset = g2 / (2.0 * w1p * sideband_sq)
    dp = omega - w1p
    front = abs(1.0 + _resolve_drive(derived, r, phi)) ** 2 if driven else 1.0
    out = 16.0 * g2**2 * front / (width_term**2 + 4.0 * kappa**2 * (dp + offset) ** 2)
    out = np.asarray(out)
    return out if out.ndim else float(out)


def lorentzian_fwhm(params: SystemParams, derived: DerivedQuantities) -> float:
    """Window full width at half maximum predicted by the narrow-window form."""
    kappa = params.cavity.kappa
    sideband_sq = 1.0 + kappa**2 / (16.0 * derived.omega1_prime**2)
    return params.mechanics.gamma1 + 4.0 * derived.g**2 / (kappa * sideband_sq)


def lorentzian_peak_offset(params: SystemParams, derived: DerivedQuantities) -> float:
    """Predicted shift of the window peak from omega1_prime (negative)."""
    kappa = params.cavity.kappa
    sideband_sq = 1.0 + kappa**2 / (16.0 * derived.omega1_prime**2)
    return -derived.g**2 / (2.0 * derived.omega1_prime * sideband_sq)


def effective_linewidth(params: SystemParams, derived: DerivedQuantities) -> float:
    """Optically broadened mechanical linewidth gamma1 + 4 g^2 / kappa."""
    return params.mechanics.gamma1 + 4.0 * derived.g**2 / params.cavity.kappa


def default_grid(params: SystemParams, derived: DerivedQuantities, n: int = 4001) -> np.ndarray:
    """Frequency grid spanning the full cavity response, centred on -delta_bar."""
    if n < 2:
        raise ParameterError(f"grid needs at least 2 points, got {n}")
    center = -params.cavity.delta_bar
    span = 3.0 * params.cavity.kappa
    return np.linspace(center - span, center + span, n)


def zoom_grid(
    params: SystemParams,
    derived: DerivedQuantities,
    n: int = 4001,
    factor: float = 1e6,
    center: float | None = None,
) -> np.ndarray:
    """Grid zoomed by ``factor`` around the transparency window.

    The default factor 1e6 turns the +-3 kappa span into one that resolves
    the window (a dozen effective linewidths at the reference point).
    """
    if n < 2:
        raise ParameterError(f"grid needs at least 2 points, got {n}")
    if factor <= 0:
        raise ParameterError(f"zoom factor must be positive, got {factor!r}")
    if center is None:
        center = -params.cavity.delta_bar
    span = 3.0 * params.cavity.kappa / factor
    return np.linspace(center - span, center + span, n)


_KIND_FUNCS = {
    SpectrumKind.DRIVEN: lambda w, p, d, r, phi: transmission_driven(w, p, d, r=r, phi=phi),
    SpectrumKind.UNDRIVEN: lambda w, p, d, r, phi: transmission_undriven(w, p, d),
    SpectrumKind.UNLOADED: lambda w, p, d, r, phi: transmission_unloaded(w, p, d),
    SpectrumKind.LORENTZIAN_DRIVEN: lambda w, p, d, r, phi: lorentzian_transmission(
        w, p, d, driven=True, r=r, phi=phi
    ),
    SpectrumKind.LORENTZIAN_UNDRIVEN: lambda w, p, d, r, phi: lorentzian_transmission(
        w, p, d, driven=False
    ),
}


def spectrum(
    kind: SpectrumKind,
    params: SystemParams,
    derived: DerivedQuantities,
    omega_grid: np.ndarray | None = None,
    *,
    r: float | None = None,
    phi: float | None = None,
) -> ComplexSpectrum:
    """Evaluate one analytic spectrum kind on a grid (default grid if omitted)."""
    if kind not in _KIND_FUNCS:
        raise ParameterError(f"cannot evaluate spectra of kind {kind!r} analytically")
    if omega_grid is None:
        omega_grid = default_grid(params, derived)
    omega_grid = np.asarray(omega_grid, dtype=float)
    values = np.asarray(_KIND_FUNCS[kind](omega_grid, params, derived, r, phi), dtype=complex)
    return ComplexSpectrum(
        omega_grid=omega_grid,
        values=values,
        kind=kind,
        params_hash=params_hash(params),
    )
