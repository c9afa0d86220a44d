"""Static figure rendering for the CLI report path.

Figures are inspection artifacts next to the delimited output, not an
interactive surface: everything renders through the Agg backend straight to
SVG files with a fixed hash salt and no embedded creation date, so repeated
runs produce identical bytes.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from gravomit.history import Category, HistoricalRecord  # noqa: E402
from gravomit.response import ComplexSpectrum  # noqa: E402

__all__ = [
    "history_figure",
    "noise_figure",
    "spectrum_figure",
    "sweep_figure",
]

plt.rcParams["svg.hashsalt"] = "gravomit"
_METADATA = {"Date": None}


def _save(fig, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, format="svg", metadata=_METADATA)
    plt.close(fig)
    return path


def spectrum_figure(spectra: list[ComplexSpectrum], path: str | Path) -> Path:
    """Transmission power |t_p|^2 against probe detuning, one curve per kind."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for spec in spectra:
        ax.plot(spec.omega_grid, np.abs(spec.values) ** 2, label=spec.kind.value, lw=1.0)
    ax.set_xlabel(r"probe detuning $\omega$ (rad/s)")
    ax.set_ylabel(r"$|t_p|^2$")
    ax.legend(fontsize=8)
    ax.margins(x=0)
    fig.tight_layout()
    return _save(fig, path)


def sweep_figure(axis: str, values, delta_tp_max, path: str | Path) -> Path:
    """Peak-height change of the window along one swept parameter."""
    values = np.asarray(values, dtype=float)
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(values, np.asarray(delta_tp_max, dtype=float), marker="o", ms=3, lw=1.0)
    if values.size > 2 and np.all(values > 0) and values.max() / values.min() > 30:
        ax.set_xscale("log")
    ax.set_xlabel(axis)
    ax.set_ylabel(r"$\Delta |t_p|^2_{\max}$")
    fig.tight_layout()
    return _save(fig, path)


def noise_figure(omegas, budgets, path: str | Path) -> Path:
    """Force-noise terms against sideband frequency, log-log."""
    omegas = np.asarray(omegas, dtype=float)
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    series = {
        "zero-point": [b.s_zp for b in budgets],
        "thermal": [b.s_thermal for b in budgets],
        "external": [b.s_external for b in budgets],
        "backaction": [b.s_qba for b in budgets],
        "imprecision": [b.s_imprecision for b in budgets],
        "total": [b.s_eff for b in budgets],
    }
    for label, vals in series.items():
        vals = np.asarray(vals, dtype=float)
        if np.all(vals == 0.0):
            continue
        ax.plot(omegas, vals, label=label, lw=1.2 if label == "total" else 0.9)
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel(r"sideband frequency $\omega$ (rad/s)")
    ax.set_ylabel(r"$S_F$ (N$^2$/Hz)")
    ax.legend(fontsize=8)
    fig.tight_layout()
    return _save(fig, path)


def history_figure(records: list[HistoricalRecord], path: str | Path) -> Path:
    """Year versus mass scatter of the two experiment families."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    styles = {
        Category.GRAVITY: dict(marker="o", color="tab:blue", label="gravity experiments"),
        Category.OPTOMECHANICS: dict(marker="s", color="tab:red", label="optomechanical resonators"),
    }
    for cat, style in styles.items():
        pts = [(r.year, r.mass_kg) for r in records if r.category is cat]
        if not pts:
            continue
        years, masses = zip(*pts)
        ax.scatter(years, masses, s=14, alpha=0.8, **style)
    ax.set_yscale("log")
    ax.set_xlabel("year")
    ax.set_ylabel("mass (kg)")
    ax.legend(fontsize=8)
    fig.tight_layout()
    return _save(fig, path)
