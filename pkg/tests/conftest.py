import math
import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from equispace.signatures import enumerate_eq, enumerate_neq

settings.register_profile(
    "default",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("thorough", parent=settings.get_profile("default"), max_examples=1000)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

SQRT3_2 = math.sqrt(3) / 2


def small_signatures(max_sum: int = 6):
    """(signature, flavor) pairs for every valid signature up to ``max_sum``."""
    out = []
    for N in range(1, max_sum + 1):
        out += [(s, "coincident") for s in enumerate_eq(N)]
        out += [(s, "distinct") for s in enumerate_neq(N)]
    return out


@pytest.fixture
def triangle():
    return np.array([(0.0, 0.0), (1.0, 0.0), (0.5, SQRT3_2)])


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
