"""Figure rendering smoke tests (files only; no display backend)."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from gravomit.params import DerivedQuantities, SystemParams
from gravomit import history, noise, plotting, response


def _is_svg(path: Path) -> bool:
    return path.stat().st_size > 500 and path.read_bytes().lstrip().startswith(b"<?xml")


def test_spectrum_figure(tmp_path: Path, reference: SystemParams, derived: DerivedQuantities) -> None:
    grid = response.zoom_grid(reference, derived, n=101)
    spectra = [
        response.spectrum(response.SpectrumKind.DRIVEN, reference, derived, grid),
        response.spectrum(response.SpectrumKind.UNDRIVEN, reference, derived, grid),
    ]
    out = plotting.spectrum_figure(spectra, tmp_path / "spec.svg")
    assert _is_svg(out)


def test_sweep_figure(tmp_path: Path) -> None:
    values = np.geomspace(0.001, 0.1, 5)
    out = plotting.sweep_figure("r", values, 1.3 * values, tmp_path / "sweep.svg")
    assert _is_svg(out)


def test_noise_figure(tmp_path: Path, reference: SystemParams, derived: DerivedQuantities) -> None:
    omegas = derived.omega1_prime + np.linspace(-0.2, 0.2, 21)
    budgets = [noise.noise_budget(float(w), reference, derived) for w in omegas]
    out = plotting.noise_figure(omegas, budgets, tmp_path / "noise.svg")
    assert _is_svg(out)


def test_history_figure(tmp_path: Path) -> None:
    out = plotting.history_figure(history.load_history(), tmp_path / "history.svg")
    assert _is_svg(out)
