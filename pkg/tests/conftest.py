"""Shared fixtures: the bundled scenarios are expensive (T=200 s runs), so
each preset is simulated once per session and reused across test modules."""

import dataclasses

import pytest

from hkbnet import runner
from hkbnet.dynamics import FullState


@pytest.fixture(scope="session")
def rocking6_nc():
    return runner.simulate(runner.preset_config("rocking6-nc"))


@pytest.fixture(scope="session")
def rocking6_fsc():
    return runner.simulate(runner.preset_config("rocking6-fsc"))


@pytest.fixture(scope="session")
def rocking6_psc():
    return runner.simulate(runner.preset_config("rocking6-psc"))


@pytest.fixture(scope="session")
def rocking6_hkb():
    return runner.simulate(runner.preset_config("rocking6-hkb"))


@pytest.fixture(scope="session")
def validation5_low():
    """Validation scenario at the small coupling strength (its preset value)."""
    return runner.simulate(runner.preset_config("validation5"))


@pytest.fixture(scope="session")
def validation5_high():
    """Validation scenario at a coupling strength above the Lyapunov bound."""
    cfg = dataclasses.replace(runner.preset_config("validation5"), protocol=FullState(1.45))
    return runner.simulate(cfg)
