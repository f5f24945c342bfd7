import os
import sys

import pytest

# Add the parent directory to the path so we can import our modules
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

CONFIG_VARS = (
    'HECKE_Q',
    'HECKE_VERIFY_MAX_DIM',
    'HECKE_SWEEP_CAP',
    'HECKE_JOBS',
    'HECKE_DEBUG_RELATIONS',
    'SHUTDOWN_TIMEOUT',
)


@pytest.fixture(autouse=True)
def clean_configuration(monkeypatch):
    """Run every test against the defaults.yaml configuration."""
    for name in CONFIG_VARS:
        monkeypatch.delenv(name, raising=False)
    yield
