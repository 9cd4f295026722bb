import math

import pytest

from frictiondisc import SystemParams, design_singularity

BASE = dict(d=1.0, m=1.0, beta=0.05, c1=1e-3, c2=1e-3, k2=0.0,
            r0=0.1, omega0=-1.0, mu=1.0, gamma=-3.0 * math.pi / 4.0, kappa=0.0)
R_STAR = 0.1859
OMEGA_STAR = -1.037


@pytest.fixture(scope="session")
def base_params() -> SystemParams:
    """Fixed constants with placeholder kappa and k2."""
    return SystemParams(**BASE)


@pytest.fixture(scope="session")
def design(base_params):
    return design_singularity(R_STAR, OMEGA_STAR, base_params)


@pytest.fixture(scope="session")
def params(design) -> SystemParams:
    """Completed parameter set with the designed kappa and k2."""
    return design.params
