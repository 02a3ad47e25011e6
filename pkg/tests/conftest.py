"""Shared fixtures: desk-scale scenario and deterministic random draws."""
import numpy as np
import pytest

from greenbeam.config import SystemConfig


def desk_config(**overrides) -> SystemConfig:
    """Small, comfortably feasible scenario used across the suite.

    Thresholds and powers are scaled down from the headline scenario so
    that random draws are feasible for most seeds.
    """
    base = dict(
        M11=2, M12=2, M21=2, M22=2, N=2,
        sigma2=1e-3, P1_max=3.0, P2_max=3.0, P0=1.0,
        gamma_th=0.3, I_S=0.3, I_c=0.3, I_p=0.3,
        kappa2=1.0, e_h=0.02, e_g=0.02, T=4,
    )
    base.update(overrides)
    cfg = SystemConfig(**base)
    cfg.validate()
    return cfg


@pytest.fixture
def cfg():
    return desk_config()


@pytest.fixture
def rng():
    return np.random.default_rng(2024)


def rng_for(seed) -> np.random.Generator:
    return np.random.default_rng(seed)
