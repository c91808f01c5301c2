"""Shared chains for the test suite."""

from __future__ import annotations

import pytest

from chain.core import stationary
from zoo.registry import build_default_registry


@pytest.fixture(scope="session")
def registry():
    return build_default_registry()


@pytest.fixture(scope="session")
def two_state(registry):
    """a = 0.3, b = 0.2: π = (0.4, 0.6), second eigenvalue 0.5."""
    return registry.get("two_state").generate(a=0.3, b=0.2)


@pytest.fixture(scope="session")
def two_state_pi(two_state):
    return stationary(two_state)


@pytest.fixture(scope="session")
def flip(registry):
    return registry.get("cycle").generate(N=2)


@pytest.fixture(scope="session")
def rotation3(registry):
    return registry.get("cycle").generate(N=3)


@pytest.fixture(scope="session")
def uniform4(registry):
    return registry.get("uniform").generate(N=4)


@pytest.fixture(scope="session")
def reversible10(registry):
    return registry.get("random_reversible").generate(N=10, seed=42)
