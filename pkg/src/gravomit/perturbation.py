"""Stationary working point and first-order sideband coefficients.

The linearized dynamics split into two independently driven channels: the
probe tone at beat frequency ``omega`` and the gravitational drive at
``omega_s``.  Each channel couples a displacement coefficient to an upper and
a lower field sideband, giving an 8-equation linear system whose closed-form
solution is implemented here.  :func:`residuals` substitutes the closed forms
back into the raw equations, so any transcription error in either route shows
up as a residual far above rounding noise.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.constants import hbar

from gravomit.params import (
    DerivedQuantities,
    NumericalError,
    ParameterError,
    SystemParams,
    wrap_phase,
)

__all__ = [
    "ForceDecomposition",
    "PerturbationCoefficients",
    "StationarySolution",
    "coefficients",
    "force_decomposition",
    "pump_for_operating_point",
    "residuals",
    "stationary_solution",
]


@dataclass(frozen=True)
class StationarySolution:
    """Self-consistent static displacement, cavity field, and effective detuning."""

    x_bar_1: float
    a_bar: complex
    delta_bar: float


@dataclass(frozen=True)
class PerturbationCoefficients:
    """Sideband coefficients of the two drive channels.

    ``A1``/``B``/``C_conj`` scale the probe channel (displacement, upper
    sideband, conjugated lower sideband); the ``_grav`` triple scales the
    gravitational channel.  ``C_conj`` means the complex conjugate of the
    lower-sideband coefficient, the combination that enters the displacement
    equation directly.
    """

    A1: complex
    B: complex
    C_conj: complex
    A1_grav: complex
    B_grav: complex
    C_grav_conj: complex


@dataclass(frozen=True)
class ForceDecomposition:
    """Forces on the test mass at the probe beat frequency.

    ``k_p`` is the optical spring constant of the probe field at the given
    frequency (complex in general: real part spring, imaginary part damping;
    identically zero at omega = -delta_bar).  The amplitude/phase pairs
    (``F_p``, ``phi_fp``) and (``F_G``, ``phi_G``) are reported at the
    working frequency omega = -delta_bar.
    """

    k_p: complex
    F_p: float
    phi_fp: float
    k_G: float
    F_G: float
    phi_G: float


def stationary_solution(
    alpha_l: float,
    phi_l: float,
    params: SystemParams,
    *,
    delta: float | None = None,
    tol: float = 1e-15,
    max_iter: int = 1000,
) -> StationarySolution:
    """Solve the static working point for a pump of amplitude ``alpha_l``.

    ``delta`` is the bare pump-cavity detuning before the radiation-pressure
    pull; it defaults to ``params.cavity.delta_bar`` (the pull shifts it at
    the 1e-7 relative level at the reference point).  Fixed-point iteration
    on delta_bar = delta + G_om x_bar_1; converges to ``tol`` relative or
    raises :class:`NumericalError` after ``max_iter`` rounds (bistable pump
    powers do not contract).
    """
    cav = params.cavity
    grav = params.gravity
    mech = params.mechanics
    if delta is None:
        delta = cav.delta_bar
    if alpha_l < 0.0:
        raise ParameterError(f"alpha_l must be nonnegative, got {alpha_l!r}")

    softening = 2.0 * grav.G_newton * grav.M2 / grav.d**3
    omega1_prime_sq = mech.omega1**2 - softening
    drive = math.sqrt(cav.eta_c * cav.kappa) * alpha_l * cmath.exp(-1j * phi_l)

    delta_bar = delta
    for _ in range(max_iter):
        a_bar = drive / (cav.kappa / 2.0 - 1j * delta_bar)
        x_bar = hbar * cav.G_om * abs(a_bar) ** 2 / (mech.M1 * omega1_prime_sq)
        new_delta_bar = delta + cav.G_om * x_bar
        if abs(new_delta_bar - delta_bar) <= tol * max(abs(new_delta_bar), 1.0):
            a_bar = drive / (cav.kappa / 2.0 - 1j * new_delta_bar)
            x_bar = hbar * cav.G_om * abs(a_bar) ** 2 / (mech.M1 * omega1_prime_sq)
            return StationarySolution(x_bar_1=x_bar, a_bar=a_bar, delta_bar=new_delta_bar)
        delta_bar = new_delta_bar
    raise NumericalError(
        f"stationary working point did not converge in {max_iter} iterations "
        f"(last delta_bar = {delta_bar!r})"
    )


def pump_for_operating_point(
    params: SystemParams, derived: DerivedQuantities
) -> tuple[float, float, float]:
    """Pump tone (alpha_l, phi_l, bare delta) that reproduces the configured
    working point (abar_mag, abar_arg, delta_bar).

    Inverts the cavity response for the amplitude and phase, then backs the
    radiation-pressure pull out of the bare detuning; round-tripping through
    :func:`stationary_solution` recovers the configured field.
    """
    cav = params.cavity
    mech = params.mechanics
    resp = cav.kappa / 2.0 - 1j * cav.delta_bar
    alpha_l = cav.abar_mag * abs(resp) / math.sqrt(cav.eta_c * cav.kappa)
    phi_l = wrap_phase(-cav.abar_arg - cmath.phase(resp))
    x_bar = hbar * cav.G_om * cav.abar_mag**2 / (mech.M1 * derived.omega1_prime**2)
    delta = cav.delta_bar - cav.G_om * x_bar
    return alpha_l, phi_l, delta


def _channel(
    omega_val: float,
    params: SystemParams,
    derived: DerivedQuantities,
    weight: float,
) -> tuple[complex, complex, complex]:
    """Cavity factors (D0, E, D) of one drive channel at its frequency."""
    cav = params.cavity
    mech = params.mechanics
    d0 = cav.kappa / 2.0 - 1j * (cav.delta_bar + omega_val)
    e_fac = cav.kappa / 2.0 + 1j * (cav.delta_bar - omega_val)
    m_chi = 1.0 / (
        derived.omega1_prime**2 - omega_val**2 - 1j * omega_val * mech.gamma1
    )
    f_val = weight * m_chi / e_fac
    d_full = d0 + 2.0 * cav.delta_bar * f_val
    return d0, e_fac, d_full


def coefficients(
    omega: float,
    omega_s: float,
    params: SystemParams,
    derived: DerivedQuantities,
) -> PerturbationCoefficients:
    """Closed-form sideband coefficients for probe frequency ``omega`` and
    gravitational drive frequency ``omega_s``."""
    cav = params.cavity
    mech = params.mechanics
    a_mag = cav.abar_mag
    weight = hbar * cav.G_om**2 * a_mag**2 / mech.M1

    m_chi_p = 1.0 / (derived.omega1_prime**2 - omega**2 - 1j * omega * mech.gamma1)
    _, e_p, d_p = _channel(omega, params, derived, weight)
    a1 = hbar * cav.G_om * a_mag * m_chi_p / (mech.M1 * d_p)
    f_p = weight * m_chi_p / e_p
    b = (1.0 + 1j * f_p) / d_p
    c_conj = -1j * weight * m_chi_p / (e_p * d_p)

    m_chi_s = 1.0 / (derived.omega1_prime**2 - omega_s**2 - 1j * omega_s * mech.gamma1)
    d0_s, e_s, d_s = _channel(omega_s, params, derived, weight)
    a1_grav = 0.5 * d0_s * m_chi_s / d_s
    b_grav = 0.5j * cav.G_om * a_mag * m_chi_s / d_s
    # Same units as B_grav: the extra D0/E factor is dimensionless.
    c_grav_conj = -0.5j * cav.G_om * a_mag * d0_s * m_chi_s / (e_s * d_s)

    return PerturbationCoefficients(
        A1=a1,
        B=b,
        C_conj=c_conj,
        A1_grav=a1_grav,
        B_grav=b_grav,
        C_grav_conj=c_grav_conj,
    )


def residuals(
    coeffs: PerturbationCoefficients,
    omega: float,
    omega_s: float,
    params: SystemParams,
    derived: DerivedQuantities,
) -> np.ndarray:
    """Normalized residuals of the 8 linear equations at the given coefficients.

    Each residual is the defect of one equation divided by the magnitude of
    its largest term, so values near machine epsilon certify the closed
    forms and values near unity flag a wrong normalization.
    """
    cav = params.cavity
    mech = params.mechanics
    a_mag = cav.abar_mag
    w1p_sq = derived.omega1_prime**2
    gamma1 = mech.gamma1
    hg_m = hbar * cav.G_om / mech.M1
    pole = 1j * cav.delta_bar - cav.kappa / 2.0

    a1, b, c_conj = coeffs.A1, coeffs.B, coeffs.C_conj
    a1g, bg, cg_conj = coeffs.A1_grav, coeffs.B_grav, coeffs.C_grav_conj
    c_low = np.conj(c_conj)
    cg_low = np.conj(cg_conj)

    def norm_residual(terms_lhs: list[complex], terms_rhs: list[complex]) -> float:
        scale = max(abs(t) for t in terms_lhs + terms_rhs)
        defect = abs(sum(terms_lhs) - sum(terms_rhs))
        return defect / scale if scale > 0.0 else defect

    out = np.empty(8, dtype=float)
    # Probe channel: displacement, upper sideband, their conjugate partner
    # equations, and the lower sideband.
    out[0] = norm_residual(
        [-(omega**2) * a1],
        [-w1p_sq * a1, 1j * omega * gamma1 * a1, hg_m * a_mag * (b + c_conj)],
    )
    out[1] = norm_residual([-1j * omega * b], [pole * b, 1j * cav.G_om * a_mag * a1, 1.0])
    out[2] = norm_residual(
        [-(omega**2) * np.conj(a1)],
        [
            -w1p_sq * np.conj(a1),
            -1j * omega * gamma1 * np.conj(a1),
            hg_m * a_mag * (c_low + np.conj(b)),
        ],
    )
    out[3] = norm_residual(
        [1j * omega * c_low], [pole * c_low, 1j * cav.G_om * a_mag * np.conj(a1)]
    )
    # Gravitational channel; the factored drive leaves a bare 1/2 in the
    # displacement equations.
    out[4] = norm_residual(
        [-(omega_s**2) * a1g],
        [-w1p_sq * a1g, 1j * omega_s * gamma1 * a1g, hg_m * a_mag * (bg + cg_conj), 0.5],
    )
    out[5] = norm_residual([-1j * omega_s * bg], [pole * bg, 1j * cav.G_om * a_mag * a1g])
    out[6] = norm_residual(
        [-(omega_s**2) * np.conj(a1g)],
        [
            -w1p_sq * np.conj(a1g),
            -1j * omega_s * gamma1 * np.conj(a1g),
            hg_m * a_mag * (cg_low + np.conj(bg)),
            0.5,
        ],
    )
    out[7] = norm_residual(
        [1j * omega_s * cg_low], [pole * cg_low, 1j * cav.G_om * a_mag * np.conj(a1g)]
    )
    return out


def force_decomposition(
    omega: float, params: SystemParams, derived: DerivedQuantities
) -> ForceDecomposition:
    """Optical spring of the probe plus the drive-force amplitudes and phases.

    ``k_p`` is evaluated at the requested ``omega``; the force pairs are the
    working-frequency (omega = -delta_bar) amplitudes, computed through the
    general cavity response so they cross-check the closed forms in
    :func:`gravomit.params.derive`.
    """
    cav = params.cavity
    probe = params.probe
    a_mag = cav.abar_mag

    k_p = (
        1j
        * hbar
        * cav.G_om**2
        * a_mag**2
        * (
            1.0 / (cav.kappa / 2.0 - 1j * cav.delta_bar - 1j * omega)
            - 1.0 / (cav.kappa / 2.0 + 1j * cav.delta_bar + 1j * omega)
        )
    )

    a_bar = a_mag * cmath.exp(1j * cav.abar_arg)
    working = -cav.delta_bar
    pole = cav.kappa / 2.0 - 1j * (cav.delta_bar + working)
    z_force = (
        hbar
        * cav.G_om
        * math.sqrt(cav.eta_c * cav.kappa)
        * np.conj(a_bar)
        * probe.alpha_p
        / pole
    )
    f_p = 2.0 * abs(z_force)
    phi_fp = wrap_phase(probe.phi_p - cmath.phase(complex(z_force))) if f_p > 0.0 else 0.0

    return ForceDecomposition(
        k_p=complex(k_p),
        F_p=f_p,
        phi_fp=phi_fp,
        k_G=derived.k_G,
        F_G=derived.F_G,
        phi_G=derived.phi_G,
    )
