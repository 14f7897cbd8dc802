"""
Shared pytest fixtures for the uniest test suite.

UniestConfig caches what it read from settings and the environment; the
autouse fixture drops that cache around every test so overrides made by one
test (or by a management command) never leak into the next.
"""
import pytest

from uniest.config import UniestConfig


@pytest.fixture(autouse=True)
def _fresh_uniest_config(monkeypatch):
    monkeypatch.delenv('UNIEST_SEED', raising=False)
    UniestConfig.reset()
    yield
    UniestConfig.reset()
