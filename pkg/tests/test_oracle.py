"""Time-domain RK4 oracle against the analytic transmission formulas.

The suite runs at a reduced mechanical quality factor Q1 = 1e3 so the
ring-up fits in a test budget; the analytic formulas take the same gamma1,
so the agreement check is exact, not approximate.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np
import pytest

from gravomit.params import (
    DerivedQuantities,
    ParameterError,
    SystemParams,
    derive,
)
from gravomit import oracle
from gravomit.response import (
    effective_linewidth,
    transmission_driven,
    transmission_undriven,
)


@pytest.fixture(scope="module")
def reduced(reference: SystemParams) -> SystemParams:
    mech = dataclasses.replace(
        reference.mechanics,
        gamma1=reference.mechanics.omega1 / 1e3,
        Q1=1e3,
    )
    return dataclasses.replace(reference, mechanics=mech)


@pytest.fixture(scope="module")
def reduced_derived(reduced: SystemParams) -> DerivedQuantities:
    return derive(reduced)


def test_simulated_transmission_matches_analytic(
    reduced: SystemParams, reduced_derived: DerivedQuantities
) -> None:
    gamma_eff = effective_linewidth(reduced, reduced_derived)
    for offset in (-1.0, 0.0, 1.0):
        w = float(reduced_derived.omega1_prime + offset * gamma_eff)
        sim_u = oracle.transmission_from_simulation(reduced, reduced_derived, w, False)
        sim_d = oracle.transmission_from_simulation(reduced, reduced_derived, w, True)
        assert abs(sim_u - transmission_undriven(w, reduced, reduced_derived)) < 1e-4
        assert abs(sim_d - transmission_driven(w, reduced, reduced_derived)) < 1e-4


def test_convergence_is_fourth_order(
    reduced: SystemParams, reduced_derived: DerivedQuantities
) -> None:
    w = float(reduced_derived.omega1_prime)
    period = 2.0 * math.pi / w
    errors = []
    for steps in (52, 104, 208):
        sim = oracle.transmission_from_simulation(
            reduced, reduced_derived, w, True, dt=period / steps
        )
        errors.append(abs(sim - transmission_driven(w, reduced, reduced_derived)))
    for coarse, fine in zip(errors, errors[1:]):
        assert 10.0 < coarse / fine < 22.0


def test_bare_cavity_limit(reference: SystemParams) -> None:
    # With no pump field and no source motion the cavity is empty and linear;
    # the simulation should match the bare-cavity transmission to rounding.
    cav = dataclasses.replace(reference.cavity, abar_mag=0.0)
    grav = dataclasses.replace(reference.gravity, x_s=0.0)
    bare = dataclasses.replace(reference, cavity=cav, gravity=grav)
    d = derive(bare)
    w = -bare.cavity.delta_bar
    dt = 2.0 * math.pi / w / 1200.0
    sim = oracle.transmission_from_simulation(bare, d, w, False, dt=dt)
    assert abs(sim - transmission_undriven(w, bare, d)) < 1e-10


def test_linearity_in_probe_amplitude(
    reduced: SystemParams, reduced_derived: DerivedQuantities
) -> None:
    # Doubling alpha_p is a power-of-two rescaling of a linear system; the
    # normalized transmission is bit-identical.
    w = float(reduced_derived.omega1_prime)
    base = oracle.transmission_from_simulation(reduced, reduced_derived, w, False)
    doubled_probe = dataclasses.replace(
        reduced.probe, P_p=None, alpha_p=2.0 * reduced.probe.alpha_p
    )
    doubled = dataclasses.replace(reduced, probe=doubled_probe)
    sim = oracle.transmission_from_simulation(doubled, derive(doubled), w, False)
    assert sim == base


def test_drive_superposition(
    reduced: SystemParams, reduced_derived: DerivedQuantities
) -> None:
    # Probe + gravity response equals the sum of the single-drive responses.
    w = float(reduced_derived.omega1_prime)
    period = 2.0 * math.pi / w
    dt = period / 104.0
    duration = 600.0 * period
    both = oracle.integrate(
        reduced, reduced_derived, probe_on=True, gravity_on=True,
        duration=duration, dt=dt,
    )
    probe_only = oracle.integrate(
        reduced, reduced_derived, probe_on=True, gravity_on=False,
        duration=duration, dt=dt,
    )
    gravity_only = oracle.integrate(
        reduced, reduced_derived, probe_on=False, gravity_on=True,
        duration=duration, dt=dt,
    )
    summed = probe_only.delta_a + gravity_only.delta_a
    scale = np.max(np.abs(both.delta_a))
    assert np.max(np.abs(both.delta_a - summed)) < 1e-12 * scale


def test_gravitational_channel_amplitude(
    reduced: SystemParams, reduced_derived: DerivedQuantities
) -> None:
    # The demodulated displacement driven by gravity alone matches the
    # analytic channel coefficient applied to the acceleration amplitude.
    from gravomit.perturbation import coefficients

    w = float(reduced_derived.omega1_prime)
    period = 2.0 * math.pi / w
    dt = period / 104.0
    ring = 30.0 / effective_linewidth(reduced, reduced_derived)
    window = 400.0 * period
    series = oracle.integrate(
        reduced, reduced_derived, probe_on=False, gravity_on=True,
        duration=ring + window, dt=dt,
    )
    t_end = float(series.t[-1])
    accel = (reduced_derived.F_G / reduced.mechanics.M1) * np.exp(
        -1j * reduced_derived.phi_G
    )
    coeffs = coefficients(w, w, reduced, reduced_derived)
    predicted = coeffs.A1_grav * accel
    measured = _displacement_amplitude(series, w, (t_end - window, t_end))
    assert abs(abs(measured) - abs(predicted)) / abs(predicted) < 1e-4
    # The field channel reaches the same steady state (small leakage).
    demod = oracle.demodulate(series, w, (t_end - window, t_end))
    assert demod.residual < 1e-3


def _displacement_amplitude(
    series: oracle.TimeSeries, w: float, window: tuple[float, float]
) -> complex:
    # Same rectangle rule as oracle.demodulate, applied to the real
    # displacement: the mean of x e^{+i w t} over integer periods is the
    # coefficient of e^{-i w t}.
    i0 = int(round((window[0] - series.t[0]) / series.dt))
    count = int(round((window[1] - window[0]) / series.dt))
    t = series.t[i0 : i0 + count]
    x = series.delta_x1[i0 : i0 + count]
    return complex(np.mean(x * np.exp(1j * w * t)))


def test_demodulate_synthetic_tone() -> None:
    w = 2.0 * math.pi * 50.0
    period = 2.0 * math.pi / w
    dt = period / 64.0
    t = np.arange(64 * 40 + 1) * dt
    b, c = 0.8 - 0.3j, 0.1 + 0.05j
    z = b * np.exp(-1j * w * t) + c * np.exp(1j * w * t)
    series = oracle.TimeSeries(
        t=t, delta_x1=np.zeros_like(t), delta_a=z, dt=dt, params_hash="0" * 16
    )
    out = oracle.demodulate(series, w, (20.0 * period, 40.0 * period))
    assert out.amplitude == pytest.approx(b, rel=1e-10)
    assert out.mirror_amplitude == pytest.approx(c, rel=1e-9)
    assert out.residual < 1e-10


def test_demodulate_validations() -> None:
    w = 2.0 * math.pi * 50.0
    period = 2.0 * math.pi / w
    dt = period / 64.0
    t = np.arange(64 * 40 + 1) * dt
    series = oracle.TimeSeries(
        t=t, delta_x1=np.zeros_like(t), delta_a=np.ones_like(t, dtype=complex),
        dt=dt, params_hash="0" * 16,
    )
    with pytest.raises(ParameterError):
        oracle.demodulate(series, -w, (0.0, 20.0 * period))
    with pytest.raises(ParameterError):  # non-integer period count
        oracle.demodulate(series, w, (0.0, 20.5 * period))
    with pytest.raises(ParameterError):  # too few periods
        oracle.demodulate(series, w, (0.0, 5.0 * period))
    with pytest.raises(ParameterError):  # beyond the integrated span
        oracle.demodulate(series, w, (30.0 * period, 50.0 * period))


def test_integrate_validations(reduced: SystemParams, reduced_derived: DerivedQuantities) -> None:
    with pytest.raises(ParameterError):
        oracle.integrate(
            reduced, reduced_derived, probe_on=True, gravity_on=False,
            duration=-1.0, dt=1e-6,
        )
    with pytest.raises(ParameterError, match="dt"):
        oracle.integrate(
            reduced, reduced_derived, probe_on=True, gravity_on=False,
            duration=1.0, dt=1.0,
        )


def test_transmission_needs_a_probe(reduced: SystemParams, reduced_derived: DerivedQuantities) -> None:
    quiet_probe = dataclasses.replace(reduced.probe, P_p=0.0, alpha_p=None)
    grav = dataclasses.replace(reduced.gravity, x_s=0.0)
    quiet = dataclasses.replace(reduced, probe=quiet_probe, gravity=grav)
    with pytest.raises(ParameterError, match="alpha_p"):
        oracle.transmission_from_simulation(
            quiet, derive(quiet), float(reduced_derived.omega1_prime), False
        )
