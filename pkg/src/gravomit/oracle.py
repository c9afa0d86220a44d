"""Time-domain oracle for the frequency-domain response formulas.

Integrates the linearized perturbation dynamics (membrane position and
velocity plus the intracavity field fluctuation in the pump rotating frame)
with a fixed-step RK4 scheme, rings the system into steady state, and
demodulates a trailing integer number of probe periods.  Nothing here is
shared with the response module beyond the parameter set, so agreement is an
independent check of every transfer function.

Because the counter-rotating coupling is retained (kappa ~ omega1), a
steady state driven at one physical frequency carries both e^{-i omega t}
and e^{+i omega t} components in delta_a.  Demodulation projects both; only
power away from that frequency pair counts as leakage.

The reference quality factor of 1e7 implies ring-up times of order 1e4
simulated seconds, so validation runs at a reduced Q1 (1e3 in the test
suite) and leans on the formulas' explicit gamma1 dependence to carry the
comparison back to the full-Q configuration.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from numba import njit
from scipy.constants import hbar

from gravomit.params import (
    DerivedQuantities,
    NumericalError,
    ParameterError,
    SystemParams,
    params_hash,
)

__all__ = [
    "SteadyStateAmplitude",
    "TimeSeries",
    "demodulate",
    "integrate",
    "transmission_from_simulation",
]

_BLOWUP = 1.0e30


@dataclass(frozen=True)
class TimeSeries:
    """Trajectory of the linearized system on a uniform time grid.

    ``delta_a`` is the field fluctuation in the pump rotating frame,
    including the mean-field phase (the kernel integrates relative to
    arg(a_bar) and the constructor rotates back).
    """

    t: np.ndarray
    delta_x1: np.ndarray
    delta_a: np.ndarray
    dt: float
    params_hash: str


@dataclass(frozen=True)
class SteadyStateAmplitude:
    """One demodulated tone: the e^{-i omega t} component of delta_a.

    ``mirror_amplitude`` is the companion e^{+i omega t} component (the
    counter-rotating response at the same physical frequency); ``residual``
    is RMS(series minus both components) / RMS(series).
    """

    omega: float
    amplitude: complex
    residual: float
    mirror_amplitude: complex


@njit(cache=True)
def _deriv(t, x, v, ar, ai, w_sq, gamma1, c_force, c_field,
           half_kappa, delta_bar, s_amp, omega, theta0, grav_amp, omega_s, phi_s):
    theta = omega * t + theta0
    dx = v
    dv = (-w_sq * x - gamma1 * v + 2.0 * c_force * ar
          + grav_amp * math.cos(omega_s * t + phi_s))
    dar = -half_kappa * ar - delta_bar * ai + s_amp * math.cos(theta)
    dai = delta_bar * ar - half_kappa * ai + c_field * x - s_amp * math.sin(theta)
    return dx, dv, dar, dai


@njit(cache=True)
def _rk4_kernel(n_steps, dt, w_sq, gamma1, c_force, c_field, half_kappa,
                delta_bar, s_amp, omega, theta0, grav_amp, omega_s, phi_s,
                x0, v0, ar0, ai0):
    out = np.empty((n_steps + 1, 4))
    x, v, ar, ai = x0, v0, ar0, ai0
    out[0, 0] = x
    out[0, 1] = v
    out[0, 2] = ar
    out[0, 3] = ai
    max_da = math.hypot(ar, ai)
    half = dt / 2.0
    sixth = dt / 6.0
    for n in range(n_steps):
        t = n * dt
        a1, b1, c1, d1 = _deriv(t, x, v, ar, ai, w_sq, gamma1, c_force,
                                c_field, half_kappa, delta_bar, s_amp, omega,
                                theta0, grav_amp, omega_s, phi_s)
        a2, b2, c2, d2 = _deriv(t + half, x + half * a1, v + half * b1,
                                ar + half * c1, ai + half * d1, w_sq, gamma1,
                                c_force, c_field, half_kappa, delta_bar,
                                s_amp, omega, theta0, grav_amp, omega_s, phi_s)
        a3, b3, c3, d3 = _deriv(t + half, x + half * a2, v + half * b2,
                                ar + half * c2, ai + half * d2, w_sq, gamma1,
                                c_force, c_field, half_kappa, delta_bar,
                                s_amp, omega, theta0, grav_amp, omega_s, phi_s)
        a4, b4, c4, d4 = _deriv(t + dt, x + dt * a3, v + dt * b3,
                                ar + dt * c3, ai + dt * d3, w_sq, gamma1,
                                c_force, c_field, half_kappa, delta_bar,
                                s_amp, omega, theta0, grav_amp, omega_s, phi_s)
        x = x + sixth * (a1 + 2.0 * (a2 + a3) + a4)
        v = v + sixth * (b1 + 2.0 * (b2 + b3) + b4)
        ar = ar + sixth * (c1 + 2.0 * (c2 + c3) + c4)
        ai = ai + sixth * (d1 + 2.0 * (d2 + d3) + d4)
        out[n + 1, 0] = x
        out[n + 1, 1] = v
        out[n + 1, 2] = ar
        out[n + 1, 3] = ai
        mag = math.hypot(ar, ai)
        if mag > max_da:
            max_da = mag
        if not (math.isfinite(x) and math.isfinite(v) and math.isfinite(mag)) or mag > _BLOWUP:
            return out[: n + 2], 1, max_da
    return out, 0, max_da


def _dt_bound(params: SystemParams, derived: DerivedQuantities) -> float:
    return 2.0 * math.pi / (50.0 * max(params.cavity.kappa, derived.omega1_prime))


def _ring_rate(params: SystemParams, derived: DerivedQuantities) -> float:
    """Slowest decay rate that the driven output actually sees.

    With g = 0 the mechanics are invisible to the field, so only the cavity
    pole matters; otherwise the optically broadened mechanical linewidth
    governs (capped by kappa/2 in the hybridized regime).
    """
    kappa = params.cavity.kappa
    if derived.g == 0.0:
        return kappa / 2.0
    gamma_eff = params.mechanics.gamma1 + 4.0 * derived.g**2 / kappa
    return min(gamma_eff, kappa / 2.0)


def integrate(
    params: SystemParams,
    derived: DerivedQuantities,
    *,
    probe_on: bool,
    gravity_on: bool,
    duration: float,
    dt: float,
    omega: float | None = None,
    omega_s: float | None = None,
    initial_state: tuple[float, float, complex] | None = None,
) -> TimeSeries:
    """Integrate the linearized equations of motion from rest (or a given state).

    ``omega`` is the probe-pump detuning and ``omega_s`` the source vibration
    frequency; both default to -delta_bar, the transparency-window center.
    The step must resolve the fastest scale: dt < 2pi/(50 max(kappa,
    omega1_prime)).  Callers are responsible for a duration covering the
    ring-up when they intend to demodulate a steady state.
    """
    mech = params.mechanics
    cav = params.cavity
    if dt <= 0.0 or duration <= 0.0:
        raise ParameterError("duration and dt must be positive")
    bound = _dt_bound(params, derived)
    if dt >= bound:
        raise ParameterError(
            f"dt = {dt!r} s does not resolve the fastest scale; need dt < {bound!r} s"
        )
    n_steps = int(round(duration / dt))
    if n_steps < 10:
        raise ParameterError("duration spans fewer than 10 steps")

    if omega is None:
        omega = -cav.delta_bar
    if omega_s is None:
        omega_s = -cav.delta_bar
    s_amp = math.sqrt(cav.eta_c * cav.kappa) * params.probe.alpha_p if probe_on else 0.0
    theta0 = params.probe.phi_p + cav.abar_arg
    # Source displacement toward M1 reduces d, so the force modulation enters
    # with sign -F_G cos(omega_s t + phi_s); this is the phi_G = phi_s + pi
    # convention of the derived quantities.
    grav_amp = -derived.F_G / mech.M1 if gravity_on else 0.0
    if initial_state is None:
        x0, v0, da0 = 0.0, 0.0, 0.0 + 0.0j
    else:
        x0, v0, da0 = initial_state
        da0 = complex(da0) * cmath.exp(-1j * cav.abar_arg)

    c_force = hbar * cav.G_om * cav.abar_mag / mech.M1
    traj, status, max_da = _rk4_kernel(
        n_steps, dt,
        derived.omega1_prime**2, mech.gamma1,
        c_force, cav.G_om * cav.abar_mag,
        cav.kappa / 2.0, cav.delta_bar,
        s_amp, float(omega), theta0, grav_amp, float(omega_s), params.gravity.phi_s,
        x0, v0, da0.real, da0.imag,
    )
    if status != 0:
        t_fail = (traj.shape[0] - 1) * dt
        raise NumericalError(
            f"integration diverged near t = {t_fail:.6g} s; max |delta_a| = {max_da:.3e}"
        )
    rot = cmath.exp(1j * cav.abar_arg)
    return TimeSeries(
        t=np.arange(traj.shape[0]) * dt,
        delta_x1=traj[:, 0].copy(),
        delta_a=(traj[:, 2] + 1j * traj[:, 3]) * rot,
        dt=dt,
        params_hash=params_hash(params),
    )


def demodulate(
    series: TimeSeries, omega: float, window: tuple[float, float]
) -> SteadyStateAmplitude:
    """Project the e^{-i omega t} component of delta_a over ``window``.

    The window must cover at least 10 and an integer number of periods of
    ``omega``; over such a span the rectangle rule makes distinct harmonics
    exactly orthogonal, so the companion e^{+i omega t} component is
    extracted alongside and excluded from the leakage residual.
    """
    if omega <= 0.0:
        raise ParameterError("demodulation frequency must be positive")
    if omega * series.dt > math.pi / 2.0:
        raise ParameterError(
            "sampling too coarse for this frequency; need >= 4 samples per period"
        )
    t_start, t_end = window
    period = 2.0 * math.pi / omega
    n_periods = (t_end - t_start) / period
    if n_periods < 10.0 - 1e-9:
        raise ParameterError(
            f"window covers {n_periods:.3f} periods; at least 10 are required"
        )
    if abs(n_periods - round(n_periods)) > 1e-6 * max(n_periods, 1.0):
        raise ParameterError(
            f"window covers a non-integer period count ({n_periods!r})"
        )
    t = series.t
    i0 = int(round((t_start - t[0]) / series.dt))
    count = int(round((t_end - t_start) / series.dt))
    if i0 < 0 or i0 + count > t.size:
        raise ParameterError("window extends beyond the integrated time span")

    tw = t[i0 : i0 + count]
    z = series.delta_a[i0 : i0 + count]
    phase = np.exp(1j * omega * tw)
    amplitude = complex(np.mean(z * phase))
    mirror = complex(np.mean(z * np.conj(phase)))
    signal_rms = float(np.sqrt(np.mean(np.abs(z) ** 2)))
    if signal_rms == 0.0:
        return SteadyStateAmplitude(float(omega), 0.0j, 0.0, 0.0j)
    remainder = z - amplitude * np.conj(phase) - mirror * phase
    residual = float(np.sqrt(np.mean(np.abs(remainder) ** 2))) / signal_rms
    return SteadyStateAmplitude(float(omega), amplitude, residual, mirror)


def transmission_from_simulation(
    params: SystemParams,
    derived: DerivedQuantities,
    omega: float,
    gravity_on: bool,
    *,
    dt: float | None = None,
    window_periods: int = 200,
    ring_up_factor: float = 25.0,
    omega_s: float | None = None,
    residual_limit: float = 1e-6,
) -> complex:
    """Probe transmission at detuning ``omega`` from a time-domain run.

    The step is snapped to an integer fraction of the probe period so the
    demodulation window closes on whole periods; the run covers
    ``ring_up_factor`` decay times before the trailing ``window_periods``
    periods are demodulated.  A leakage residual above ``residual_limit``
    (steady state not reached) raises :class:`NumericalError`.
    """
    if omega <= 0.0:
        raise ParameterError("probe detuning omega must be positive here")
    if params.probe.alpha_p == 0.0:
        raise ParameterError("probe amplitude alpha_p is zero; t_p is undefined")
    if window_periods < 10:
        raise ParameterError("window_periods must be at least 10")
    period = 2.0 * math.pi / omega
    target = dt if dt is not None else _dt_bound(params, derived) / 1.02
    if target <= 0.0:
        raise ParameterError("dt must be positive")
    per_period = max(int(math.ceil(period / target - 1e-9)), 8)
    step = period / per_period
    if step >= _dt_bound(params, derived):
        raise ParameterError(
            f"dt = {step!r} s does not resolve the fastest scale"
        )

    ring_steps = int(math.ceil(ring_up_factor / (_ring_rate(params, derived) * step)))
    window_steps = per_period * window_periods
    duration = (ring_steps + window_steps) * step
    series = integrate(
        params,
        derived,
        probe_on=True,
        gravity_on=gravity_on,
        duration=duration,
        dt=step,
        omega=omega,
        omega_s=omega if omega_s is None else omega_s,
    )
    t_start = series.t[ring_steps]
    result = demodulate(series, omega, (t_start, t_start + window_steps * step))
    if result.residual > residual_limit:
        raise NumericalError(
            f"demodulation residual {result.residual:.3e} exceeds "
            f"{residual_limit:.1e}; steady state not reached"
        )
    cav = params.cavity
    probe_field = params.probe.alpha_p * cmath.exp(-1j * params.probe.phi_p)
    return 1.0 - math.sqrt(cav.eta_c * cav.kappa) * result.amplitude / probe_field
