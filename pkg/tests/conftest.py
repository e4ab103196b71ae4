import numpy as np
import pytest

import siml.asymptotics
import siml.estimator
import siml.kernel
from siml._backend import BACKENDS

_USERS = (siml.kernel, siml.estimator, siml.asymptotics)


@pytest.fixture(params=sorted(BACKENDS))
def backend(request, monkeypatch):
    """Run a test once per available numerical core."""
    core = BACKENDS[request.param]
    for mod in _USERS:
        monkeypatch.setattr(mod, "core", core)
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
