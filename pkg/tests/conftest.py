"""Fixtures for testing"""
import numpy as np
import pytest

from bubble_casimir.const import CHECK_SEED, REFERENCE_SCENARIOS
from bubble_casimir.kernel import CutoffProfile
from bubble_casimir.matching import MediumConfig


@pytest.fixture
def default_medium() -> MediumConfig:
    """The 2e4 -> 1 collapse at R = 500 nm."""
    return MediumConfig(n_gas_in=2.0e4, n_gas_out=1.0)


@pytest.fixture
def default_cutoff(default_medium) -> CutoffProfile:
    """Cutoffs of the default medium."""
    return CutoffProfile.from_medium(default_medium)


@pytest.fixture
def table_rows():
    """The five reference scenarios."""
    return REFERENCE_SCENARIOS


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator, identical in every test."""
    return np.random.default_rng(CHECK_SEED)
