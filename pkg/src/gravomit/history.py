"""Bundled dataset of historical gravity and optomechanics experiments.

Two centuries of gravitational-constant measurements next to two decades of
cavity-optomechanical resonators, kept for the mass-scale crossover query:
the lightest source mass ever used in a gravity experiment first dipped
below the heaviest resonator ever operated in 2021, which is the regime this
package models.
"""

from __future__ import annotations

import csv
import hashlib
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from importlib.resources import files

from gravomit.params import ParameterError

__all__ = [
    "Category",
    "HistoricalRecord",
    "dataset_checksum",
    "load_history",
    "overlap_year",
]

_YEAR_RANGE = (1790, 2025)


class Category(str, Enum):
    GRAVITY = "gravity_experiment"
    OPTOMECHANICS = "optomechanics_resonator"


@dataclass(frozen=True)
class HistoricalRecord:
    """One tabulated experiment.

    Gravity rows carry the measured constant (in units of 1e-11 m^3 s^-2
    kg^-1) and its relative uncertainty in ppm; resonator rows carry the
    mechanical frequency (omega_m / 2pi, MHz), quality factor, and operating
    temperature.  Fields outside a row's category are None, as are the few
    values the source leaves blank.
    """

    category: Category
    row: int
    author: str
    mass_kg: float
    material: str
    geometry: str
    year: int
    g_value_1e11: float | None
    g_uncertainty_ppm: float | None
    omega_m_mhz: float | None
    q_m: float | None
    temperature_k: float | None

    def __post_init__(self) -> None:
        if not self.mass_kg > 0.0:
            raise ParameterError(f"mass_kg must be positive, got {self.mass_kg!r}")
        lo, hi = _YEAR_RANGE
        if not lo <= self.year <= hi:
            raise ParameterError(f"year {self.year!r} outside [{lo}, {hi}]")


def _data_bytes() -> bytes:
    return (files("gravomit") / "data" / "experiments.csv").read_bytes()


def dataset_checksum() -> str:
    """SHA-256 hex digest of the raw dataset file."""
    return hashlib.sha256(_data_bytes()).hexdigest()


def _opt_float(text: str) -> float | None:
    return float(text) if text else None


@lru_cache(maxsize=1)
def _records() -> tuple[HistoricalRecord, ...]:
    rows = csv.DictReader(_data_bytes().decode("utf-8").splitlines())
    out = []
    for raw in rows:
        out.append(
            HistoricalRecord(
                category=Category(raw["category"]),
                row=int(raw["row"]),
                author=raw["author"],
                mass_kg=float(raw["mass_kg"]),
                material=raw["material"],
                geometry=raw["geometry"],
                year=int(raw["year"]),
                g_value_1e11=_opt_float(raw["g_value_1e11"]),
                g_uncertainty_ppm=_opt_float(raw["g_uncertainty_ppm"]),
                omega_m_mhz=_opt_float(raw["omega_m_mhz"]),
                q_m=_opt_float(raw["q_m"]),
                temperature_k=_opt_float(raw["temperature_k"]),
            )
        )
    return tuple(out)


def load_history(
    category: Category | str | None = None,
    *,
    min_year: int | None = None,
    max_year: int | None = None,
) -> list[HistoricalRecord]:
    """All records, optionally filtered by category and year range."""
    if category is not None:
        category = Category(category)
    out = []
    for rec in _records():
        if category is not None and rec.category is not category:
            continue
        if min_year is not None and rec.year < min_year:
            continue
        if max_year is not None and rec.year > max_year:
            continue
        out.append(rec)
    return out


def overlap_year() -> int | None:
    """First year the two mass scales met.

    Tracks the running minimum gravity source mass against the running
    maximum resonator mass; returns the first year the former is at or below
    the latter, or None if that never happens.
    """
    events: dict[int, list[HistoricalRecord]] = {}
    for rec in _records():
        events.setdefault(rec.year, []).append(rec)
    min_gravity = float("inf")
    max_resonator = 0.0
    for year in sorted(events):
        for rec in events[year]:
            if rec.category is Category.GRAVITY:
                min_gravity = min(min_gravity, rec.mass_kg)
            else:
                max_resonator = max(max_resonator, rec.mass_kg)
        if min_gravity <= max_resonator:
            return year
    return None
