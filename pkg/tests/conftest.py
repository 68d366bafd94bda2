#!/usr/bin/env python3
"""
Pytest configuration and shared fixtures for the weylcheck test suite.
"""

import os
import sys
import tempfile
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from weylcheck import connection, geometry, hermitian  # noqa: E402
from weylcheck.catalog import entry  # noqa: E402
from weylcheck.config import RunSettings  # noqa: E402
from weylcheck.declarations import parse_declaration  # noqa: E402
from weylcheck.geometry import Chart, MapSpec, WeylStructure  # noqa: E402

# Few points keep the suite fast; catalog expectations hold for any sample.
TEST_POINTS = 16


@pytest.fixture(autouse=True)
def reset_environment():
    """Auto-fixture that resets environment variables after each test."""
    original_env = os.environ.copy()
    for key in [k for k in os.environ if k.startswith("WEYLCHECK_")]:
        del os.environ[key]
    yield
    os.environ.clear()
    os.environ.update(original_env)


@pytest.fixture(autouse=True)
def clear_point_caches():
    """Memoised jets are keyed by object identity; drop them between tests."""
    yield
    geometry.clear_caches()
    connection.clear_caches()
    hermitian.clear_caches()


@pytest.fixture
def temp_directory():
    """Fixture providing a temporary directory for file operations."""
    with tempfile.TemporaryDirectory() as temp_dir:
        yield Path(temp_dir)


@pytest.fixture
def temp_env_file(temp_directory):
    """Fixture creating a temporary .env file with non-default run settings."""
    env_file = temp_directory / ".env"
    env_file.write_text(
        "# Test run defaults\n"
        "WEYLCHECK_POINTS=12\n"
        "WEYLCHECK_SEED=3\n"
        "WEYLCHECK_TOL=1e-6\n"
        "WEYLCHECK_WORKERS=2\n"
        "WEYLCHECK_LOG_LEVEL=info\n"
    )
    return env_file


@pytest.fixture
def settings():
    """Run settings with a small sample."""
    return RunSettings(points=TEST_POINTS)


@pytest.fixture
def flat_chart():
    return Chart(("x1", "x2", "x3", "x4"), ((-1.0, 1.0),) * 4)


@pytest.fixture
def flat_r4(flat_chart):
    """Flat R^4 with zero Lee form."""
    return WeylStructure.euclidean(flat_chart)


@pytest.fixture
def flat_r3():
    return WeylStructure.euclidean(Chart(("y1", "y2", "y3"), ((-2.0, 2.0),) * 3))


@pytest.fixture
def projection_r4_r3(flat_r4, flat_r3):
    """Orthogonal projection (x1, x2, x3, x4) -> (x1, x2, x3)."""
    return MapSpec.build(flat_r4, flat_r3, ["x1", "x2", "x3"])


@pytest.fixture
def sample_point():
    return np.array([0.3, -0.2, 0.5, 0.1])


@pytest.fixture
def catalog_declaration():
    """Factory building a declaration from a catalog entry."""
    def _build(name, orientation=None):
        found = entry(name)
        return parse_declaration(found.text, found.name, orientation=orientation)
    return _build


@pytest.fixture
def gibbons_hawking(catalog_declaration):
    return catalog_declaration("gibbons_hawking")


def pytest_configure(config):
    """Configure custom pytest markers."""
    config.addinivalue_line("markers", "unit: Unit tests")
    config.addinivalue_line("markers", "integration: Integration tests")
    config.addinivalue_line("markers", "slow: Slow running tests")
    config.addinivalue_line("markers", "cli: Command line interface tests")
