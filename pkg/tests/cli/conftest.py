"""
CLI fixtures
"""

import pytest
from loguru import logger
from typer.testing import CliRunner


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()


@pytest.fixture(autouse=True)
def detach_log_sink():
    """Commands bind loguru to the runner's stderr, which is closed afterwards"""
    yield
    logger.remove()
