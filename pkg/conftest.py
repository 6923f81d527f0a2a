"""
Pytest configuration and fixtures for the Zariski closure engine tests
"""
import os
import sys
import pytest
from sympy import ImmutableMatrix, Rational

# Add the project root to Python path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

# Set test environment variables
os.environ['LOG_LEVEL'] = 'WARNING'
os.environ['GROEBNER_MAX_BASIS'] = '5000'
os.environ['DEFAULT_ORDER'] = 'grevlex'
os.environ['DEFAULT_VERIFY_K'] = '0'
os.environ['SLOW_STAGE_SECONDS'] = '60'


@pytest.fixture(autouse=True)
def fresh_settings():
    """Re-read settings for every test so monkeypatched variables take effect."""
    from modules.settings import get_settings

    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def example_matrix():
    """The 2x2 matrix with eigenvalues 2 and 4 whose closure is a toric curve."""
    return ImmutableMatrix([[10, -8], [6, -4]])


@pytest.fixture
def example_ideal_text():
    """Equations of the closure of example_matrix in the letters [[x, w], [z, y]]."""
    return [
        "x + w - y - z",
        "12*x + 9*w - 12*y - 16*z",
        "(-3*x + 4*y + 4*z - 3*w)^2 - (4*x - 3*y - 4*z + 3*w)",
    ]


@pytest.fixture
def point_and_line_matrix():
    """Semigroup closure is one isolated point plus the line diag(0, 0, z)."""
    return ImmutableMatrix([[0, 1, 0], [0, 0, 0], [0, 0, 2]])


@pytest.fixture
def twisted_cubic_matrix():
    """4x4 Jordan block with eigenvalue 1/5."""
    lam = Rational(1, 5)
    return ImmutableMatrix(4, 4, lambda i, j: lam if i == j else (1 if j == i + 1 else 0))


@pytest.fixture
def runner():
    from click.testing import CliRunner

    return CliRunner()
