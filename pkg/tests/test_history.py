"""Historical experiments dataset: integrity, filters, and the mass crossover."""

from __future__ import annotations

import pytest

from gravomit.history import (
    Category,
    HistoricalRecord,
    dataset_checksum,
    load_history,
    overlap_year,
)
from gravomit.params import ParameterError

DATASET_SHA256 = "fe3ec7f711fb781ddbcae82338a4ce27c196d64f1f098184e780a0a47a4dd968"


def test_row_counts() -> None:
    assert len(load_history()) == 103
    assert len(load_history(Category.GRAVITY)) == 48
    assert len(load_history(Category.OPTOMECHANICS)) == 55
    assert len(load_history("gravity_experiment")) == 48


def test_dataset_checksum_is_frozen() -> None:
    assert dataset_checksum() == DATASET_SHA256


def test_known_rows() -> None:
    gravity = {(r.author, r.year): r for r in load_history(Category.GRAVITY)}
    cavendish = gravity[("H. Cavendish", 1798)]
    assert cavendish.row == 1
    assert cavendish.mass_kg == pytest.approx(316.0)
    assert cavendish.material == "Lead"
    westphal = gravity[("Westphal et al.", 2021)]
    assert westphal.mass_kg == pytest.approx(9.2e-5)
    assert westphal.material == "Gold"
    assert westphal.geometry == "Sphere"
    resonators = {(r.author, r.year): r for r in load_history(Category.OPTOMECHANICS)}
    liu = resonators[("Liu et al.", 2021)]
    assert liu.mass_kg == pytest.approx(1.26e-6)
    assert liu.q_m == pytest.approx(1e7)
    assert liu.temperature_k == pytest.approx(0.02)


def test_year_filters() -> None:
    recent = load_history(min_year=2020)
    assert all(r.year >= 2020 for r in recent)
    vintage = load_history(Category.GRAVITY, max_year=1900)
    assert all(r.year <= 1900 for r in vintage)
    assert any(r.author == "H. Cavendish" for r in vintage)


def test_missing_numeric_fields_are_none() -> None:
    gravity = load_history(Category.GRAVITY)
    cook = next(r for r in gravity if r.author == "A. H. Cook" and r.year == 1968)
    assert cook.g_value_1e11 is None
    # Gravity rows never carry resonator columns.
    assert all(r.omega_m_mhz is None for r in gravity)


def test_overlap_year_is_the_mass_crossover() -> None:
    assert overlap_year() == 2021
    # Before the crossover the lightest source mass still exceeds the
    # heaviest resonator.
    gravity = load_history(Category.GRAVITY, max_year=2020)
    resonators = load_history(Category.OPTOMECHANICS, max_year=2020)
    assert min(r.mass_kg for r in gravity) > max(r.mass_kg for r in resonators)


def test_record_validation() -> None:
    with pytest.raises(ParameterError):
        HistoricalRecord(
            category=Category.GRAVITY, row=1, author="Nobody", mass_kg=-1.0,
            material=None, geometry=None, year=1900, g_value_1e11=None,
            g_uncertainty_ppm=None, omega_m_mhz=None, q_m=None, temperature_k=None,
        )
    with pytest.raises(ParameterError):
        HistoricalRecord(
            category=Category.GRAVITY, row=1, author="Nobody", mass_kg=1.0,
            material=None, geometry=None, year=1492, g_value_1e11=None,
            g_uncertainty_ppm=None, omega_m_mhz=None, q_m=None, temperature_k=None,
        )
