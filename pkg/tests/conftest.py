from __future__ import annotations

import pytest

from gravomit.params import DerivedQuantities, SystemParams, derive, load_preset


@pytest.fixture(scope="session")
def reference() -> SystemParams:
    return load_preset("reference")


@pytest.fixture(scope="session")
def derived(reference: SystemParams) -> DerivedQuantities:
    return derive(reference)
