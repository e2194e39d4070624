"""
Pytest configuration file for qktdiscord tests.
"""

import pytest

from qktdiscord.config import config


@pytest.fixture(autouse=True)
def default_settings():
    """Run every test against the built-in settings."""
    config.reset()
    yield config
    config.reset()
