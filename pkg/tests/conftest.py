"""Shared fixtures: a few standard parameter sets used across test modules."""

import pytest

from transientq import ModelParams


@pytest.fixture
def params_std() -> ModelParams:
    """Supercritical set exercised throughout: b=1.2, mu=1, n0=15."""
    return ModelParams(b=1.2, mu=1.0, n0=15)


@pytest.fixture
def params_sub() -> ModelParams:
    """Subcritical set: b=0.8, mu=1, n0=15."""
    return ModelParams(b=0.8, mu=1.0, n0=15)


@pytest.fixture
def params_crit() -> ModelParams:
    """Critical set b=mu, where the CF takes its limiting branch."""
    return ModelParams(b=1.0, mu=1.0, n0=15)
