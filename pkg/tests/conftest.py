import numpy as np
import pytest
from hypothesis import settings

from hardylab.model import build_model

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


@pytest.fixture
def s2():
    return build_model(2)


@pytest.fixture
def s3():
    return build_model(3)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
