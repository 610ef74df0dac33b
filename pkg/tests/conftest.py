import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from capbound.channels import random_channel
from capbound.optimize import OptOptions

settings.register_profile(
    "ci",
    deadline=None,
    max_examples=25,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")


@pytest.fixture(scope="session")
def fast_opts():
    return OptOptions(restarts=6, max_iter=400)


@pytest.fixture(scope="session")
def tiny_opts():
    return OptOptions(restarts=3, max_iter=200)


@pytest.fixture(scope="session")
def channel_corpus():
    """Small fixed set of random channels with dims <= 3."""
    rng = np.random.default_rng(1234)
    dims = [(2, 2, 2), (2, 2, 3), (3, 2, 2), (2, 3, 2), (3, 3, 2)]
    return [random_channel(rng, *d) for d in dims]
