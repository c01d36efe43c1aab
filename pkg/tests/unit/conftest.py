"""
Pytest configuration and fixtures for unit tests
"""

import sys
from pathlib import Path

import numpy as np
import pytest

# Add project root to path
src_path = Path(__file__).parent.parent.parent
if str(src_path) not in sys.path:
    sys.path.insert(0, str(src_path))

from src.config import get_settings  # noqa: E402
from src.core.data_models import CurveContext  # noqa: E402


@pytest.fixture
def rng():
    """Deterministic generator for property checks"""
    return np.random.default_rng(20240501)


@pytest.fixture
def genus_two_char3():
    return CurveContext.of(3, 2)


@pytest.fixture
def genus_two_char2():
    return CurveContext.of(2, 2)


@pytest.fixture(autouse=True)
def clear_settings_cache(monkeypatch):
    """Each test sees a fresh Settings instance"""
    for key in ("FROBWEDGE_LOG_DIR", "FROBWEDGE_LOG_LEVEL", "FROBWEDGE_MAX_PRIME"):
        monkeypatch.delenv(key, raising=False)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def temp_output_dir(tmp_path):
    """Temporary output directory"""
    output_dir = tmp_path / "output"
    output_dir.mkdir()
    return output_dir
