"""Shared fixtures and parameter-drawing helpers for the test suite."""

import numpy as np
import pytest

from spinbath import BathSpec, BosonModel, critical_coupling

SEED = 20260814


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)


@pytest.fixture
def fig_model():
    """The (omega0, lam, k) combination used by most response figures."""
    return BosonModel(omega0=1.0, lam=0.3, N=100, k=0.3)


@pytest.fixture
def quad_model():
    """Quadratic sector (lam = 0), the regime both oracles can reach."""
    return BosonModel(omega0=1.0, lam=0.0, k=0.3)


def drude(gamma, s=1.0, Omega=1.0):
    return BathSpec("drude", s=s, Omega=Omega, gamma=gamma)


def expcut(gamma, s=1.0, Omega=1.0):
    return BathSpec("exp", s=s, Omega=Omega, gamma=gamma)


def draw_stable(rng, n, k_min=0.05):
    """Random (model, bath) pairs strictly below the transition coupling."""
    out = []
    for _ in range(n):
        omega0 = rng.uniform(0.3, 2.0)
        k = rng.uniform(k_min, 1.5)
        model = BosonModel(omega0=omega0, lam=0.0, k=k)
        gamma = rng.uniform(0.0, 0.95) * critical_coupling(model)
        out.append((model, drude(gamma, Omega=rng.uniform(0.5, 5.0))))
    return out
