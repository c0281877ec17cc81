"""
Shared fixtures: one parameter set per phase and a clean solver/settings state.
"""
import pytest

from app.config import get_settings
from app.dependencies import set_solver
from app.models import AsepParams
from app.services.params import derive_aw


@pytest.fixture(autouse=True)
def clean_state():
    """Every test starts from environment settings and automatic solver choice."""
    get_settings.cache_clear()
    set_solver(None)
    yield
    set_solver(None)
    get_settings.cache_clear()


@pytest.fixture
def tasep() -> AsepParams:
    """Totally asymmetric chain at alpha = beta = 1 (maximal current, Catalan numbers)."""
    return AsepParams(alpha=1.0, beta=1.0)


@pytest.fixture
def low_density() -> AsepParams:
    """C = 4, A = 0."""
    return AsepParams(alpha=0.2, beta=1.0)


@pytest.fixture
def high_density() -> AsepParams:
    """A = 4, C = 0."""
    return AsepParams(alpha=1.0, beta=0.2)


@pytest.fixture
def general() -> AsepParams:
    """All five rates active."""
    return AsepParams(alpha=0.6, beta=0.8, gamma=0.2, delta=0.3, q=0.5)


@pytest.fixture
def tasep_aw(tasep):
    return derive_aw(tasep)


@pytest.fixture
def low_density_aw(low_density):
    return derive_aw(low_density)
