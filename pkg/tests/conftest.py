import math

import numpy as np
import pytest
from scipy.linalg import expm

from cv_htdt.gaussian import ChannelSpec, GaussianState, ResourceTriplet, symplectic_form


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def random_symplectic(rng):
    """S = expm(Omega H) with H symmetric is symplectic."""

    def make(modes, scale=0.3):
        h = rng.normal(scale=scale, size=(2 * modes, 2 * modes))
        return expm(symplectic_form(modes) @ (h + h.T) / 2)

    return make


@pytest.fixture
def random_state(rng, random_symplectic):
    """Random physical state: a symplectic transform of a product of thermal states."""

    def make(modes):
        s = random_symplectic(modes)
        nu = np.repeat(1 + rng.exponential(0.5, size=modes), 2)
        cov = s @ np.diag(nu) @ s.T
        return GaussianState(rng.normal(size=2 * modes), (cov + cov.T) / 2)

    return make


@pytest.fixture
def random_triplet(rng):
    def make(a_max=5.0, b_max=5.0):
        a = rng.uniform(1, a_max)
        b = rng.uniform(1, b_max)
        t = ResourceTriplet(a, b, 0.0)
        return ResourceTriplet(a, b, rng.uniform(0, 0.999) * t.correlation_bound())

    return make


@pytest.fixture
def random_config(rng, random_triplet):
    """Random (resource, channel, g, d) satisfying every precondition of the protocol."""

    def make(x_range=(0.1, 2.0), g_range=(0.2, 2.0), ab_max=5.0):
        resource = random_triplet(ab_max, ab_max)
        x = rng.uniform(*x_range)
        channel = ChannelSpec(x, abs(1 - x) + rng.exponential(0.5))
        g = rng.uniform(*g_range)
        d = max(g / x, 1.0) * (1 + rng.exponential(2.0))
        return resource, channel, g, d

    return make


@pytest.fixture
def fig5_resource():
    """Resource reaching Alice and Bob when Charlie (2r_C = 2.1) sits midway on a 0.7 link."""
    x_c = math.sqrt(0.7)
    return ResourceTriplet(
        x_c * math.cosh(2.1) + 1 - x_c,
        x_c * math.cosh(2.1) + 1 - x_c,
        x_c * math.sinh(2.1),
    )
