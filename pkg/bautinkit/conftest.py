import pytest

from bautinkit.analysis.catalog import CatalogEntry
from bautinkit.analysis.catalog import example1_quadratic
from bautinkit.analysis.catalog import example2_nonradical
from bautinkit.analysis.catalog import exp_z
from bautinkit.analysis.catalog import monomial_entry


@pytest.fixture
def example1() -> CatalogEntry:
    return example1_quadratic()


@pytest.fixture
def example2() -> CatalogEntry:
    return example2_nonradical()


@pytest.fixture
def exponential() -> CatalogEntry:
    return exp_z()


@pytest.fixture
def cubic() -> CatalogEntry:
    return monomial_entry(3)


@pytest.fixture
def small_runs(settings):
    """Sample counts small enough for the heavier sweeps to finish quickly."""
    settings.BAUTINKIT_SAMPLES = 32
    settings.BAUTINKIT_K_MAX = 24
    return settings
