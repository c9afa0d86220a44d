"""Peak metrics, driven/undriven and loaded/unloaded comparisons, sweeps.

float64 cannot resolve the gravitational frequency pull: omega1_prime -
omega1 is about -1.0e-11 rad/s, i.e. 1.4 ulp at the 5.0e4 rad/s carrier.
The comparison path therefore rebuilds the response in mpmath arithmetic
straight from the raw parameters (exact SI h, the configured Newton constant)
and locates extrema of |t|^2 by bisecting the derivative inside validated
brackets.  Certified error bars come from re-running with perturbed brackets
and ten extra digits.

Sweeps trade that rigor for speed: peak heights and widths vary at the 1e-2
scale there, so an ordinary float64 bounded minimizer is adequate.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Callable

import mpmath as mp
import numpy as np
from scipy.optimize import brentq, minimize_scalar

from gravomit.params import (
    DerivedQuantities,
    NumericalError,
    ParameterError,
    SystemParams,
    derive,
)
from gravomit.response import (
    SpectrumKind,
    effective_linewidth,
    lorentzian_fwhm,
    transmission_driven,
    transmission_undriven,
)

__all__ = [
    "ComparisonReport",
    "PeakMetrics",
    "SweepResult",
    "compare",
    "delta_transmission",
    "delta_transmission_max",
    "peak_metrics",
    "sweep",
]

SWEEP_AXES = ("kappa", "g", "Q1", "r", "phi")

# Exact SI Planck constant; scipy's float hbar is its rounding.
_H_PLANCK = "6.62607015e-34"


@dataclass(frozen=True)
class PeakMetrics:
    """Transparency-window summary: peak height (of |t|^2), peak position, FWHM."""

    height: float
    omega_max: float
    fwhm: float


@dataclass(frozen=True)
class ComparisonReport:
    """Differences between two window configurations.

    ``delta_*`` are first-minus-second (driven minus undriven, or loaded
    minus unloaded).  ``precision_estimate`` maps each delta to a certified
    numerical error bound; ``resolved`` marks deltas that exceed their bound.
    """

    mode: str
    delta_height: float
    delta_omega_max: float
    delta_fwhm: float
    precision_estimate: dict[str, float]
    resolved: dict[str, bool]


@dataclass(frozen=True)
class SweepResult:
    """Window metrics along one parameter axis.

    ``metrics[i]`` holds the (driven, undriven) pair at ``values[i]``;
    ``delta_tp_max[i]`` is the corresponding peak-height difference.
    """

    axis: str
    values: np.ndarray
    metrics: list[tuple[PeakMetrics, PeakMetrics]]
    delta_tp_max: np.ndarray


class _MpModel:
    """The response rebuilt in mpmath arithmetic from raw parameters.

    When the configured detuning equals minus the float-rounded softened
    frequency (the sideband lock), the model keeps delta_bar = -omega1_prime
    exactly at working precision instead of embedding the rounded float;
    otherwise the sub-ulp lock error would swamp the effects measured here.
    """

    def __init__(
        self,
        params: SystemParams,
        derived: DerivedQuantities,
        *,
        r: float | None = None,
        phi: float | None = None,
    ):
        mech = params.mechanics
        cav = params.cavity
        grav = params.gravity
        self.M1 = mp.mpf(mech.M1)
        self.omega1 = mp.mpf(mech.omega1)
        self.gamma1 = mp.mpf(mech.gamma1)
        self.kappa = mp.mpf(cav.kappa)
        self.eta_c = mp.mpf(cav.eta_c)
        hbar_mp = mp.mpf(_H_PLANCK) / (2 * mp.pi)
        softening = 2 * mp.mpf(grav.G_newton) * mp.mpf(grav.M2) / mp.mpf(grav.d) ** 3
        self.omega1_prime = mp.sqrt(self.omega1**2 - softening)
        float_lock = -float(derived.omega1_prime)
        if cav.delta_bar == float_lock:
            self.delta_bar = -self.omega1_prime
        else:
            self.delta_bar = mp.mpf(cav.delta_bar)
        # hbar G_om^2 |abar|^2 / M1 == 2 omega1' g^2, shared by the loaded
        # and unloaded responses.
        self.weight = hbar_mp * mp.mpf(cav.G_om) ** 2 * mp.mpf(cav.abar_mag) ** 2 / self.M1
        r_eff = derived.r if r is None else r
        phi_eff = derived.phi if phi is None else phi
        self.drive = mp.mpf(r_eff) * mp.expjpi(mp.mpf(phi_eff) / mp.pi)

    def _f(self, omega: mp.mpf, loaded: bool) -> mp.mpc:
        w_res = self.omega1_prime if loaded else self.omega1
        mech = w_res**2 - omega**2 - 1j * omega * self.gamma1
        e_fac = 1j * (self.delta_bar - omega) + self.kappa / 2
        return self.weight / (mech * e_fac)

    def transmission(self, omega: mp.mpf, kind: SpectrumKind) -> mp.mpc:
        if kind in (SpectrumKind.LORENTZIAN_DRIVEN, SpectrumKind.LORENTZIAN_UNDRIVEN):
            return self._lorentzian(omega, kind is SpectrumKind.LORENTZIAN_DRIVEN)
        loaded = kind is not SpectrumKind.UNLOADED
        f_val = self._f(omega, loaded)
        d_val = (
            -1j * (self.delta_bar + omega)
            + self.kappa / 2
            + 2 * self.delta_bar * f_val
        )
        numerator = mp.mpc(1)
        if kind is SpectrumKind.DRIVEN:
            sideband = (2 / self.kappa) * (
                1j * self.delta_bar - 1j * omega + self.kappa / 2
            )
            numerator += 1j * f_val * (1 + self.drive * sideband)
        else:
            numerator += 1j * f_val
        return 1 - numerator * self.eta_c * self.kappa / d_val

    def _lorentzian(self, omega: mp.mpf, driven: bool) -> mp.mpc:
        g2 = self.weight / (2 * self.omega1_prime)
        w1p = self.omega1_prime
        z1 = 4 * g2 + self.kappa * self.gamma1 + 1j * self.kappa**2 * self.gamma1 / (4 * w1p)
        z2 = self.kappa**2 / (2 * w1p) - 2j * self.kappa
        front = 1 + self.drive if driven else mp.mpf(1)
        return 4 * g2 * (1 + 1j * self.kappa / (4 * w1p)) * front / (z1 + z2 * (omega - w1p))

    def power(self, omega: mp.mpf, kind: SpectrumKind) -> mp.mpf:
        t_val = self.transmission(omega, kind)
        return mp.re(t_val) ** 2 + mp.im(t_val) ** 2

    def center(self, kind: SpectrumKind) -> mp.mpf:
        return self.omega1 if kind is SpectrumKind.UNLOADED else self.omega1_prime


def _kind_of(kind: SpectrumKind | str) -> SpectrumKind:
    if isinstance(kind, SpectrumKind):
        out = kind
    else:
        try:
            out = SpectrumKind(kind)
        except ValueError as exc:
            raise ParameterError(f"unknown spectrum kind {kind!r}") from exc
    if out is SpectrumKind.ORACLE:
        raise ParameterError("peak metrics require an analytic spectrum kind")
    return out


def _bisect_root(func: Callable[[mp.mpf], mp.mpf], lo: mp.mpf, hi: mp.mpf) -> mp.mpf:
    """Sign-change bisection down to working-precision bracket width."""
    f_lo = func(lo)
    f_hi = func(hi)
    if mp.sign(f_lo) == mp.sign(f_hi):
        raise NumericalError("lost the sign change while bisecting")
    target = mp.mpf(10) ** (-mp.mp.dps + 8) * (abs(lo) + abs(hi) + 1)
    while hi - lo > target:
        mid = (lo + hi) / 2
        f_mid = func(mid)
        if f_mid == 0:
            return mid
        if mp.sign(f_mid) == mp.sign(f_lo):
            lo, f_lo = mid, f_mid
        else:
            hi, f_hi = mid, f_mid
    return (lo + hi) / 2


def _mp_peak(
    model: _MpModel,
    kind: SpectrumKind,
    gamma_eff: float,
    bracket_scale: float,
) -> tuple[mp.mpf, mp.mpf]:
    """Locate the window maximum: returns (omega_max, height)."""
    center = model.center(kind)
    power = lambda w: model.power(w, kind)
    slope = lambda w: mp.diff(power, w)
    half = mp.mpf(bracket_scale) * gamma_eff
    for _ in range(6):
        lo, hi = center - half, center + half
        if mp.sign(slope(lo)) > 0 and mp.sign(slope(hi)) < 0:
            w_max = _bisect_root(slope, lo, hi)
            return w_max, power(w_max)
        half *= 2
    raise NumericalError(
        "no transparency-window maximum found near the mechanical resonance"
    )


def _mp_fwhm(
    model: _MpModel,
    kind: SpectrumKind,
    w_max: mp.mpf,
    height: mp.mpf,
    gamma_eff: float,
    fwhm_guess: float,
    absolute_half: bool,
) -> mp.mpf:
    center = model.center(kind)
    window = 20 * mp.mpf(gamma_eff)
    if absolute_half:
        level = height / 2
    else:
        base = (model.power(center - window, kind) + model.power(center + window, kind)) / 2
        level = base + (height - base) / 2
    above = lambda w: model.power(w, kind) - level

    crossings = []
    for direction in (-1, 1):
        step = direction * mp.mpf(fwhm_guess) / 8
        prev = w_max
        found = None
        for k in range(1, 400):
            cur = w_max + k * step
            if abs(cur - center) > window:
                break
            if above(cur) < 0:
                found = (min(prev, cur), max(prev, cur))
                break
            prev = cur
        if found is None:
            raise NumericalError(
                "no transparency window: |t|^2 never falls to the half level "
                "inside the search span"
            )
        crossings.append(_bisect_root(above, found[0], found[1]))
    return crossings[1] - crossings[0]


def _metrics_mp(
    params: SystemParams,
    derived: DerivedQuantities,
    kind: SpectrumKind,
    *,
    r: float | None,
    phi: float | None,
    dps: int,
    absolute_half: bool,
    bracket_scale: float = 2.0,
) -> tuple[mp.mpf, mp.mpf, mp.mpf]:
    if derived.g == 0.0:
        raise NumericalError("no transparency window: the coupling g vanishes")
    gamma_eff = effective_linewidth(params, derived)
    fwhm_guess = lorentzian_fwhm(params, derived)
    with mp.workdps(dps):
        model = _MpModel(params, derived, r=r, phi=phi)
        w_max, height = _mp_peak(model, kind, gamma_eff, bracket_scale)
        width = _mp_fwhm(model, kind, w_max, height, gamma_eff, fwhm_guess, absolute_half)
        return height, w_max, width


def peak_metrics(
    params: SystemParams,
    derived: DerivedQuantities,
    kind: SpectrumKind | str = SpectrumKind.DRIVEN,
    *,
    r: float | None = None,
    phi: float | None = None,
    dps: int = 50,
    absolute_half: bool = False,
) -> PeakMetrics:
    """Extended-precision height, position, and FWHM of the transparency window.

    The half level sits midway between the peak and the local baseline
    sampled 20 effective linewidths off resonance; ``absolute_half`` selects
    the plain height/2 convention instead.  Raises :class:`NumericalError`
    when no window exists (for instance g = 0).
    """
    kind = _kind_of(kind)
    height, w_max, width = _metrics_mp(
        params, derived, kind, r=r, phi=phi, dps=dps, absolute_half=absolute_half
    )
    return PeakMetrics(height=float(height), omega_max=float(w_max), fwhm=float(width))


def delta_transmission(
    omega,
    params: SystemParams,
    derived: DerivedQuantities,
    *,
    r: float | None = None,
    phi: float | None = None,
):
    """Pointwise transmission change |t_pG|^2 - |t_p0|^2 caused by the drive."""
    driven = transmission_driven(omega, params, derived, r=r, phi=phi)
    undriven = transmission_undriven(omega, params, derived)
    return np.abs(driven) ** 2 - np.abs(undriven) ** 2


def delta_transmission_max(
    params: SystemParams,
    derived: DerivedQuantities,
    *,
    r: float | None = None,
    phi: float | None = None,
    dps: int = 50,
) -> float:
    """Peak-height change max|t_pG|^2 - max|t_p0|^2 (extended precision)."""
    h_driven, _, _ = _metrics_mp(
        params, derived, SpectrumKind.DRIVEN, r=r, phi=phi, dps=dps, absolute_half=False
    )
    h_undriven, _, _ = _metrics_mp(
        params, derived, SpectrumKind.UNDRIVEN, r=None, phi=None, dps=dps, absolute_half=False
    )
    return float(h_driven - h_undriven)


def compare(
    params: SystemParams,
    derived: DerivedQuantities,
    mode: str = "dynamic",
    *,
    dps: int = 50,
    absolute_half: bool = True,
) -> ComparisonReport:
    """Compare transparency windows between two sensing configurations.

    ``dynamic``: source mass vibrating versus at rest (both loaded).
    ``static``: source mass loaded at rest versus removed (resonance reverts
    from omega1_prime to omega1).

    Widths default to the absolute height/2 level here, unlike
    :func:`peak_metrics`: the baseline-referenced level rescales with the
    drive envelope and would cancel the first-order width change this
    comparison exists to measure.

    Every delta carries a certified numerical bound from re-running the
    extremum search with perturbed brackets and ten extra digits; ``resolved``
    records whether the physical difference exceeds that bound.
    """
    if mode == "dynamic":
        kinds = (SpectrumKind.DRIVEN, SpectrumKind.UNDRIVEN)
    elif mode == "static":
        kinds = (SpectrumKind.UNDRIVEN, SpectrumKind.UNLOADED)
    else:
        raise ParameterError(f"unknown comparison mode {mode!r}")

    def deltas(dps_run: int, bracket_scale: float) -> tuple[mp.mpf, mp.mpf, mp.mpf]:
        first = _metrics_mp(
            params, derived, kinds[0], r=None, phi=None, dps=dps_run,
            absolute_half=absolute_half, bracket_scale=bracket_scale,
        )
        second = _metrics_mp(
            params, derived, kinds[1], r=None, phi=None, dps=dps_run,
            absolute_half=absolute_half, bracket_scale=bracket_scale,
        )
        return (first[0] - second[0], first[1] - second[1], first[2] - second[2])

    with mp.workdps(dps + 10):
        nominal = deltas(dps, 2.0)
        variants = [deltas(dps, 1.5), deltas(dps, 3.0), deltas(dps + 10, 2.0)]
        names = ("height", "omega_max", "fwhm")
        scale = mp.mpf(float(derived.omega1_prime))
        floor = mp.mpf(10) ** (-(dps - 10)) * scale
        estimate: dict[str, float] = {}
        resolved: dict[str, bool] = {}
        for idx, name in enumerate(names):
            spread = max(abs(v[idx] - nominal[idx]) for v in variants)
            bound = max(spread, floor)
            estimate[name] = float(bound)
            resolved[name] = bool(abs(nominal[idx]) > bound)

    return ComparisonReport(
        mode=mode,
        delta_height=float(nominal[0]),
        delta_omega_max=float(nominal[1]),
        delta_fwhm=float(nominal[2]),
        precision_estimate=estimate,
        resolved=resolved,
    )


def _float_metrics(
    t_func: Callable[[np.ndarray], np.ndarray],
    center: float,
    fwhm_guess: float,
    gamma_eff: float,
) -> PeakMetrics:
    """float64 peak metrics for sweeps (adequate away from ulp-scale deltas)."""
    power = lambda w: float(np.abs(t_func(np.asarray(w, dtype=float)))) ** 2
    lo, hi = center - 2.0 * fwhm_guess, center + 2.0 * fwhm_guess
    res = minimize_scalar(
        lambda w: -power(w), bounds=(lo, hi), method="bounded",
        options={"xatol": 1e-12 * max(abs(center), 1.0)},
    )
    # Brent stops at sqrt(eps)*|w| ~ 1e-4 rad/s here; polish with parabolic
    # vertex steps, which localize a smooth extremum far better.
    w_max = float(res.x)
    h = gamma_eff / 20.0
    for _ in range(3):
        p_lo, p_mid, p_hi = power(w_max - h), power(w_max), power(w_max + h)
        curls = p_lo - 2.0 * p_mid + p_hi
        if curls < 0.0:
            w_max += 0.5 * h * (p_lo - p_hi) / curls
        h /= 8.0
    height = power(w_max)
    window = 20.0 * gamma_eff
    base = (power(center - window) + power(center + window)) / 2.0
    level = base + (height - base) / 2.0

    def above(w: float) -> float:
        return power(w) - level

    crossings = []
    for direction in (-1, 1):
        step = direction * fwhm_guess / 8.0
        prev = w_max
        found = None
        for k in range(1, 400):
            cur = w_max + k * step
            if abs(cur - center) > window:
                break
            if above(cur) < 0.0:
                found = (min(prev, cur), max(prev, cur))
                break
            prev = cur
        if found is None:
            raise NumericalError("no transparency window along the sweep")
        crossings.append(brentq(above, found[0], found[1], xtol=1e-13 * max(abs(center), 1.0)))
    return PeakMetrics(height=height, omega_max=w_max, fwhm=crossings[1] - crossings[0])


def _sweep_point(
    params: SystemParams, derived: DerivedQuantities, axis: str, value: float
) -> tuple[SystemParams, DerivedQuantities, float, float]:
    """Parameter set for one sweep value; returns (params, derived, r, phi).

    Optomechanical axes hold the drive ratio and phase at their base values
    so only the window shape responds; the r/phi axes do the reverse.
    """
    r_fix, phi_fix = derived.r, derived.phi
    if axis == "kappa":
        cav = dataclasses.replace(params.cavity, kappa=value)
        new = dataclasses.replace(params, cavity=cav)
        return new, derive(new), r_fix, phi_fix
    if axis == "g":
        abar = value / (params.cavity.G_om * derived.x_zpf)
        cav = dataclasses.replace(params.cavity, abar_mag=abar)
        new = dataclasses.replace(params, cavity=cav)
        return new, derive(new), r_fix, phi_fix
    if axis == "Q1":
        mech = dataclasses.replace(
            params.mechanics, gamma1=params.mechanics.omega1 / value, Q1=value
        )
        new = dataclasses.replace(params, mechanics=mech)
        return new, derive(new), r_fix, phi_fix
    if axis == "r":
        return params, derived, value, phi_fix
    if axis == "phi":
        return params, derived, r_fix, value
    raise ParameterError(f"unknown sweep axis {axis!r}; expected one of {SWEEP_AXES}")


def sweep(
    params: SystemParams,
    derived: DerivedQuantities,
    axis: str,
    values,
) -> SweepResult:
    """Window metrics (driven and undriven) along one parameter axis.

    ``axis`` is one of kappa, g, Q1 (window shape) or r, phi (drive).  Values
    must be positive for the shape axes.
    """
    values = np.asarray(values, dtype=float)
    if values.ndim != 1 or values.size == 0:
        raise ParameterError("sweep needs a one-dimensional, nonempty value list")
    if axis in ("kappa", "g", "Q1") and np.any(values <= 0.0):
        raise ParameterError(f"sweep axis {axis} needs positive values")

    metrics: list[tuple[PeakMetrics, PeakMetrics]] = []
    delta_max = np.empty(values.size, dtype=float)
    for idx, value in enumerate(values):
        p_i, d_i, r_i, phi_i = _sweep_point(params, derived, axis, float(value))
        gamma_eff = effective_linewidth(p_i, d_i)
        fwhm_guess = lorentzian_fwhm(p_i, d_i)
        center = d_i.omega1_prime
        driven = _float_metrics(
            lambda w: transmission_driven(w, p_i, d_i, r=r_i, phi=phi_i),
            center, fwhm_guess, gamma_eff,
        )
        undriven = _float_metrics(
            lambda w: transmission_undriven(w, p_i, d_i),
            center, fwhm_guess, gamma_eff,
        )
        metrics.append((driven, undriven))
        delta_max[idx] = driven.height - undriven.height
    return SweepResult(axis=axis, values=values, metrics=metrics, delta_tp_max=delta_max)
