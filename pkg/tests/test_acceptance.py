"""Acceptance gate: one test per release criterion, one verdict line each.

Every test prints ``criterion NN [PASS]`` (or ``[FAIL]``) so a plain
``pytest -s tests/test_acceptance.py`` reads as a checklist.  Tolerances are
stated inline next to each assertion; reported target values are the ones
the package is expected to reproduce, with their agreed bands.
"""

from __future__ import annotations

import cmath
import dataclasses
import math
import time

import numpy as np
import pytest

from gravomit import analysis, history, noise, oracle, response
from gravomit.params import (
    DerivedQuantities,
    SystemParams,
    derive,
    phonon_occupancy,
    prestressed_frequency,
)
from gravomit.perturbation import coefficients, residuals


def _verdict(number: int, description: str, ok: bool) -> None:
    print(f"criterion {number:02d} [{'PASS' if ok else 'FAIL'}] {description}")
    assert ok, f"criterion {number:02d} failed: {description}"


def _within(value: float, target: float, rel: float) -> bool:
    return abs(value - target) <= rel * abs(target)


def _factor_of(value: float, target: float, factor: float) -> bool:
    return abs(target) / factor <= abs(value) <= abs(target) * factor


def test_criterion_01_window_contrast(reference: SystemParams, derived: DerivedQuantities) -> None:
    start = time.perf_counter()
    peak_delta = analysis.delta_transmission_max(reference, derived)
    grid = response.zoom_grid(reference, derived, n=4001)
    pointwise = np.abs(
        response.transmission_driven(grid, reference, derived)
    ) ** 2 - np.abs(response.transmission_undriven(grid, reference, derived)) ** 2
    elapsed = time.perf_counter() - start
    ok = (
        _within(peak_delta, 0.023, 0.10)
        and _within(float(np.max(pointwise)), 0.023, 0.10)
        and elapsed < 1.0
    )
    _verdict(
        1,
        f"vibration raises the window peak by {peak_delta:.4f} "
        f"(target 0.023 +-10%) in {elapsed:.2f} s",
        ok,
    )


def test_criterion_02_drive_forces(derived: DerivedQuantities) -> None:
    ok = (
        _within(derived.F_G, 6.4e-18, 0.02)
        and _within(derived.F_p, 365.5e-18, 0.02)
        and _within(derived.r, 1.75e-2, 0.02)
    )
    _verdict(
        2,
        f"F_G = {derived.F_G * 1e18:.3f} aN (6.4 +-2%), "
        f"F_p = {derived.F_p * 1e18:.1f} aN (365.5 +-2%), "
        f"r = {derived.r:.4e} (1.75e-2 +-2%)",
        ok,
    )


def test_criterion_03_operating_point(reference: SystemParams, derived: DerivedQuantities) -> None:
    assert reference.membrane is not None
    f_membrane = prestressed_frequency(reference.membrane) / (2.0 * math.pi)
    ok = (
        _within(derived.x_zpf, 2.9e-17, 0.02)
        and _within(f_membrane, 249.6e3, 0.01)
        and 50.0 <= derived.n_bar_p <= 500.0
        and 7.0 <= derived.snr_shot <= 22.0
    )
    _verdict(
        3,
        f"x_zpf = {derived.x_zpf:.3e} m (2.9e-17 +-2%), membrane "
        f"{f_membrane / 1e3:.1f} kHz (249.6 +-1%), n_p = {derived.n_bar_p:.1f} "
        f"in [50, 500], SNR = {derived.snr_shot:.2f} in [7, 22]",
        ok,
    )


def test_criterion_04_drive_factor_scaling(reference: SystemParams, derived: DerivedQuantities) -> None:
    undriven = analysis.peak_metrics(reference, derived, "undriven")
    center = -reference.cavity.delta_bar
    t0_center = complex(response.transmission_undriven(center, reference, derived))
    worst_ratio, worst_phase = 0.0, 0.0
    for r_val in (0.005, 0.02, 0.05):
        for phi_val in (0.0, math.pi / 2, -math.pi / 2, math.pi, -math.pi):
            driven = analysis.peak_metrics(reference, derived, "driven", r=r_val, phi=phi_val)
            factor = 1.0 + r_val * cmath.exp(1j * phi_val)
            ratio_err = abs(driven.height / undriven.height / abs(factor) ** 2 - 1.0)
            tg_center = complex(
                response.transmission_driven(center, reference, derived, r=r_val, phi=phi_val)
            )
            phase_err = abs(cmath.phase(tg_center / t0_center) - cmath.phase(factor))
            worst_ratio = max(worst_ratio, ratio_err)
            worst_phase = max(worst_phase, phase_err)
    ok = worst_ratio < 1e-4 and worst_phase < 1e-6
    _verdict(
        4,
        f"peak ratio follows |1 + r e^(i phi)|^2 to {worst_ratio:.1e} (< 1e-4) "
        f"and the center phase to {worst_phase:.1e} rad (< 1e-6)",
        ok,
    )


def test_criterion_05_dynamic_comparison(reference: SystemParams, derived: DerivedQuantities) -> None:
    reported = {"height": 2.3e-2, "omega_max": -1.9e-11, "fwhm": 3.6e-10}
    start = time.perf_counter()
    rep = analysis.compare(reference, derived, "dynamic")
    elapsed = time.perf_counter() - start
    measured = {
        "height": rep.delta_height,
        "omega_max": rep.delta_omega_max,
        "fwhm": rep.delta_fwhm,
    }
    ok = elapsed < 30.0
    for name, target in reported.items():
        ok = ok and math.copysign(1.0, measured[name]) == math.copysign(1.0, target)
        ok = ok and _factor_of(measured[name], target, 3.0)
        ok = ok and rep.precision_estimate[name] < abs(target)
    _verdict(
        5,
        f"dynamic deltas ({measured['height']:.2e}, {measured['omega_max']:.2e}, "
        f"{measured['fwhm']:.2e}) match reported signs, within 3x of "
        f"(2.3e-2, -1.9e-11, 3.6e-10), bounds below them, in {elapsed:.1f} s",
        ok,
    )


def test_criterion_06_static_comparison(reference: SystemParams, derived: DerivedQuantities) -> None:
    rep = analysis.compare(reference, derived, "static")
    flagged = [name for name, is_resolved in rep.resolved.items() if not is_resolved]
    ok = _factor_of(rep.delta_omega_max, 1.0e-11, 3.0)
    for name in ("height", "fwhm"):
        bound = rep.precision_estimate[name]
        ok = ok and bound > 0.0
        # Either the delta is resolved against its bound, or the report says
        # explicitly that it sits below numerical resolution.
        ok = ok and (rep.resolved[name] or name in flagged)
    _verdict(
        6,
        f"static shift {rep.delta_omega_max:.2e} rad/s within 3x of 1.0e-11; "
        f"height/width deltas carry precision bounds"
        + (f"; below resolution: {flagged}" if flagged else ""),
        ok,
    )


def test_criterion_07_noise_budget(reference: SystemParams, derived: DerivedQuantities) -> None:
    budget = noise.noise_budget(derived.omega1_prime, reference, derived)
    closing = noise.required_external_noise(1.9e3, derived.omega1_prime, reference, derived)
    env = dataclasses.replace(reference.environment, S_x_ext=closing)
    closed = dataclasses.replace(reference, environment=env)
    round_trip = noise.noise_budget(derived.omega1_prime, closed, derive(closed)).tau_seconds
    ok = (
        _within(budget.s_thermal, 1.75e-33, 0.05)
        and _within(budget.tau_seconds, 43.0, 0.10)
        and budget.tau_seconds < 100.0  # nowhere near the 1.9e3 s figure
        and "do not follow" in (noise.__doc__ or "")
        and closing > 0.0
        and _within(round_trip, 1.9e3, 1e-9)
    )
    _verdict(
        7,
        f"S_T = {budget.s_thermal:.3e} N^2/Hz (1.75e-33 +-5%), tau = "
        f"{budget.tau_seconds:.1f} s (43 +-10%); 1.9e3 s needs documented "
        f"external noise {closing:.2e} m^2/Hz",
        ok,
    )


def test_criterion_08_time_domain_oracle(reference: SystemParams) -> None:
    start = time.perf_counter()
    mech = dataclasses.replace(
        reference.mechanics, gamma1=reference.mechanics.omega1 / 1e3, Q1=1e3
    )
    reduced = dataclasses.replace(reference, mechanics=mech)
    der = derive(reduced)
    gamma_eff = response.effective_linewidth(reduced, der)
    freqs = der.omega1_prime + np.linspace(-1.0, 1.0, 10) * gamma_eff
    worst = 0.0
    for w in freqs:
        w = float(w)
        sim_u = oracle.transmission_from_simulation(reduced, der, w, False)
        sim_d = oracle.transmission_from_simulation(reduced, der, w, True)
        worst = max(worst, abs(sim_u - response.transmission_undriven(w, reduced, der)))
        worst = max(worst, abs(sim_d - response.transmission_driven(w, reduced, der)))

    center = float(der.omega1_prime)
    period = 2.0 * math.pi / center
    errors = [
        abs(
            oracle.transmission_from_simulation(reduced, der, center, True, dt=period / n)
            - response.transmission_driven(center, reduced, der)
        )
        for n in (52, 104, 208)
    ]
    orders = [math.log2(coarse / fine) for coarse, fine in zip(errors, errors[1:])]
    elapsed = time.perf_counter() - start
    ok = worst < 1e-4 and all(3.3 < order < 4.5 for order in orders) and elapsed < 300.0
    _verdict(
        8,
        f"independent RK4 run agrees with the formulas to {worst:.1e} (< 1e-4) "
        f"at 10 window frequencies, convergence order {orders[0]:.2f}/{orders[1]:.2f} "
        f"(~4), in {elapsed:.0f} s",
        ok,
    )


def test_criterion_09_sideband_closed_forms(reference: SystemParams, derived: DerivedQuantities) -> None:
    rng = np.random.default_rng(1798)
    center = -reference.cavity.delta_bar
    span = 3.0 * reference.cavity.kappa
    worst_res = 0.0
    for _ in range(100):
        omega = center + rng.uniform(-span, span)
        omega_s = center + rng.uniform(-span, span)
        coeffs = coefficients(omega, omega_s, reference, derived)
        worst_res = max(worst_res, float(np.max(residuals(coeffs, omega, omega_s, reference, derived))))
    cav = reference.cavity
    worst_b = 0.0
    for omega in center + np.linspace(-span, span, 50):
        coeffs = coefficients(float(omega), float(omega), reference, derived)
        via_b = 1.0 - cav.eta_c * cav.kappa * coeffs.B
        direct = complex(response.transmission_undriven(float(omega), reference, derived))
        worst_b = max(worst_b, abs(via_b - direct))
    ok = worst_res < 1e-12 and worst_b < 1e-13
    _verdict(
        9,
        f"closed-form sideband coefficients: equation residuals {worst_res:.1e} "
        f"(< 1e-12 at 100 random points), B-route transmission off by {worst_b:.1e} (< 1e-13)",
        ok,
    )


def test_criterion_10_model_properties(reference: SystemParams, derived: DerivedQuantities) -> None:
    checks: list[bool] = []
    grid = response.default_grid(reference, derived, n=501)

    # Zero force ratio reproduces the undriven spectrum bit for bit.
    checks.append(
        bool(
            np.array_equal(
                response.transmission_driven(grid, reference, derived, r=0.0, phi=2.0),
                response.transmission_undriven(grid, reference, derived),
            )
        )
    )

    # chi(-omega) = chi*(omega) exactly.
    rng = np.random.default_rng(7)
    omegas = rng.uniform(1e2, 1e6, size=25)
    checks.append(
        all(
            complex(response.susceptibility(-w, reference, derived))
            == complex(response.susceptibility(w, reference, derived)).conjugate()
            for w in omegas
        )
    )

    # F_G = 2 G M1 M2 x_s / d^3 scaling in each knob, to 1e-12 relative.
    def f_g(scale_m2: float = 1.0, scale_xs: float = 1.0, scale_d: float = 1.0) -> float:
        grav = dataclasses.replace(
            reference.gravity,
            M2=reference.gravity.M2 * scale_m2,
            x_s=reference.gravity.x_s * scale_xs,
            d=reference.gravity.d * scale_d,
        )
        return derive(dataclasses.replace(reference, gravity=grav)).F_G

    base = f_g()
    checks.append(_within(f_g(scale_m2=2.0), 2.0 * base, 1e-12))
    checks.append(_within(f_g(scale_xs=1.5), 1.5 * base, 1e-12))
    checks.append(_within(f_g(scale_d=2.0), base / 8.0, 1e-12))

    # Thermal occupancy grows with temperature.
    occs = [phonon_occupancy(derived.omega1_prime, t) for t in (5e-3, 10e-3, 20e-3)]
    checks.append(occs[0] < occs[1] < occs[2])

    # Optomechanical sweeps move both windows synchronously.
    result = analysis.sweep(
        reference, derived, "kappa", reference.cavity.kappa * np.array([0.9, 1.1])
    )
    for driven, undriven in result.metrics:
        checks.append(abs(driven.omega_max - undriven.omega_max) < 1e-7 * undriven.omega_max)
        checks.append(abs(driven.fwhm / undriven.fwhm - 1.0) < 1e-6)

    # Drive sweeps follow the cos(phi) and linear-r laws to 5%.
    h0 = analysis.peak_metrics(reference, derived, "undriven").height
    phis = np.linspace(-math.pi, math.pi, 7)
    phi_sweep = analysis.sweep(reference, derived, "phi", phis)
    predicted = h0 * (2.0 * derived.r * np.cos(phis) + derived.r**2)
    checks.append(
        bool(np.max(np.abs(phi_sweep.delta_tp_max - predicted)) < 0.05 * 2.0 * derived.r * h0)
    )
    rs = np.array([0.005, 0.01, 0.02, 0.04])
    r_sweep = analysis.sweep(reference, derived, "r", rs)
    slopes = r_sweep.delta_tp_max / rs
    checks.append(bool(np.max(slopes) / np.min(slopes) < 1.05))

    ok = all(checks)
    _verdict(
        10,
        f"model properties: r = 0 degeneracy, chi symmetry, F_G scaling, "
        f"occupancy monotonicity, synchronous windows, cos(phi) and linear-r "
        f"laws ({sum(checks)}/{len(checks)} checks)",
        ok,
    )


def test_criterion_11_historical_dataset() -> None:
    gravity = history.load_history(history.Category.GRAVITY)
    resonators = history.load_history(history.Category.OPTOMECHANICS)
    checksum = history.dataset_checksum()
    ok = (
        len(gravity) == 48
        and len(resonators) == 55
        and checksum == "fe3ec7f711fb781ddbcae82338a4ce27c196d64f1f098184e780a0a47a4dd968"
        and history.overlap_year() == 2021
    )
    _verdict(
        11,
        f"historical dataset: 48 + 55 rows, checksum {checksum[:12]}..., "
        f"mass ranges first overlap in {history.overlap_year()}",
        ok,
    )
