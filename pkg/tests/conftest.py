"""Shared fixtures and hypothesis profiles."""

import os

import pytest
from hypothesis import settings

from kdissim.instances import gen_grid
from kdissim.network import DirectedNetwork

settings.register_profile("default", max_examples=100, deadline=None)
settings.register_profile("thorough", max_examples=1000, deadline=None)
settings.register_profile("quick", max_examples=20, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture
def g22() -> DirectedNetwork:
    return gen_grid(2, 2)


@pytest.fixture
def g66() -> DirectedNetwork:
    return gen_grid(6, 6)


@pytest.fixture(autouse=True)
def _no_config_file(monkeypatch: pytest.MonkeyPatch, tmp_path_factory: pytest.TempPathFactory) -> None:
    """Keep a host /etc/default/kdissim and KDISSIM_* variables out of the tests."""
    import kdissim.config as config_mod

    missing = tmp_path_factory.getbasetemp() / "no-such-config"
    monkeypatch.setattr(config_mod, "DEFAULT_CONFIG_PATH", str(missing))
    for key in list(os.environ):
        if key.startswith("KDISSIM_"):
            monkeypatch.delenv(key)
