"""Force-noise budget of the gravity measurement.

All terms are one-sided force spectral densities in N^2/Hz, evaluated at a
sideband frequency ``omega`` (the imprecision term is the only one that
depends on it, through the mechanical susceptibility).  The per-point
measurement time comes in two conventions: ``tau_paper`` is the literal ratio
F_G^2 / S_eff of the source formula (dimensionally a rate), ``tau_seconds``
is its reciprocal, the time over which the accumulated signal power matches
the noise power in a 1 Hz band.

With the reference parameters and zero external displacement noise the
budget is thermally dominated and ``tau_seconds`` comes out near 43 s.
Kilosecond-scale per-point times do not follow from these terms under
either convention; they require an additional external displacement noise
floor of order 7e-39 m^2/Hz, which :func:`required_external_noise`
back-solves from a target time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.constants import hbar

from gravomit.params import DerivedQuantities, ParameterError, SystemParams
from gravomit.response import susceptibility

__all__ = ["NoiseBudget", "noise_budget", "required_external_noise"]


@dataclass(frozen=True)
class NoiseBudget:
    """Force-noise terms (N^2/Hz) and the resulting per-point times."""

    s_zp: float
    s_thermal: float
    s_external: float
    s_qba: float
    s_imprecision: float
    s_eff: float
    tau_paper: float
    tau_seconds: float


def noise_budget(
    omega: float, params: SystemParams, derived: DerivedQuantities
) -> NoiseBudget:
    """Evaluate the five-term force-noise budget at sideband frequency ``omega``.

    Zero-point and thermal terms use the bare mechanical frequency; the
    external term converts the configured displacement noise S_x_ext
    (m^2/Hz) through the rigid-oscillator transfer M1^2 omega1^4; quantum
    backaction scales with the cooperativity; imprecision divides the readout
    floor (1/2 + S_add) by the transduction gain, which carries the loaded
    susceptibility |chi(omega)|^2.
    """
    mech = params.mechanics
    env = params.environment
    probe = params.probe

    s_zp = mech.gamma1 * hbar * mech.M1 * mech.omega1
    s_thermal = 2.0 * mech.gamma1 * hbar * mech.M1 * mech.omega1 * derived.n_bar_1
    s_external = mech.M1**2 * mech.omega1**4 * env.S_x_ext
    s_qba = (2.0 * derived.coop / derived.x_zpf**2) * mech.gamma1 * hbar**2
    chi = susceptibility(omega, params, derived)
    gain = 4.0 * derived.coop * mech.gamma1 * abs(chi) ** 2 / derived.x_zpf**2
    if gain == 0.0:
        # No transduction (C = 0): infinite imprecision, not a crash.
        s_imprecision = math.inf
    else:
        s_imprecision = (0.5 + probe.S_add) / gain

    s_eff = s_zp + s_thermal + s_external + s_qba + s_imprecision
    tau_paper = derived.F_G**2 / s_eff
    tau_seconds = math.inf if tau_paper == 0.0 else 1.0 / tau_paper
    return NoiseBudget(
        s_zp=s_zp,
        s_thermal=s_thermal,
        s_external=s_external,
        s_qba=s_qba,
        s_imprecision=s_imprecision,
        s_eff=s_eff,
        tau_paper=tau_paper,
        tau_seconds=tau_seconds,
    )


def required_external_noise(
    tau_seconds: float, omega: float, params: SystemParams, derived: DerivedQuantities
) -> float:
    """Displacement noise S_x_ext (m^2/Hz) that makes the per-point time
    ``tau_seconds``.

    Raises :class:`ParameterError` if the requested time is at or below the
    floor set by the other noise terms (external noise can only lengthen it).
    """
    if tau_seconds <= 0.0:
        raise ParameterError(f"tau_seconds must be positive, got {tau_seconds!r}")
    mech = params.mechanics
    base = noise_budget(omega, params, derived)
    floor = base.s_eff - base.s_external
    s_eff_target = tau_seconds * derived.F_G**2
    if s_eff_target <= floor:
        floor_tau = floor / derived.F_G**2
        raise ParameterError(
            f"requested per-point time {tau_seconds!r} s is not reachable: "
            f"the other noise terms already set a floor of {floor_tau!r} s"
        )
    return (s_eff_target - floor) / (mech.M1**2 * mech.omega1**4)
