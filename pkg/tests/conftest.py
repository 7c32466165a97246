import pytest

from surgkit.services.catalog import load_catalog


@pytest.fixture(autouse=True)
def _quiet_env(monkeypatch):
    monkeypatch.setenv("SURGKIT_QUIET", "1")
    monkeypatch.delenv("SURGKIT_CATALOG", raising=False)
    monkeypatch.delenv("SURGKIT_CONFIG", raising=False)
    monkeypatch.delenv("SURGKIT_WORKERS", raising=False)


@pytest.fixture
def catalog():
    return load_catalog()


def nonzero(lo: int, hi: int):
    return [l for l in range(lo, hi + 1) if l != 0]
