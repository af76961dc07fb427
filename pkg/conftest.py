"""
Shared test setup
Every test starts from the default caps and an empty search kernel.
"""
from pathlib import Path

import pytest

from ockhamlab.config import reset_config
from ockhamlab.kernel import reset_kernel

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(autouse=True)
def fresh_state():
    reset_config()
    reset_kernel()
    yield
    reset_config()
    reset_kernel()


@pytest.fixture
def fixture_path():
    """Path of fixtures/<name>.json"""
    def path(name: str) -> str:
        return str(FIXTURES / f"{name}.json")
    return path
