"""Shared fixtures"""

from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings

from darbouxembed.config import reset_settings
from darbouxembed.models.curves import GeneratorPair, InitialCurve
from darbouxembed.numkit.functions import poly

FIXTURES = Path(__file__).parent / "fixtures"

settings.register_profile("darbouxembed", max_examples=100, deadline=None)
settings.load_profile("darbouxembed")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def example2():
    return InitialCurve.example2()


@pytest.fixture
def example2_path():
    return FIXTURES / "example2.json"


@pytest.fixture(params=[(1.0, 2.0), (1.0, 4.0), (2.0, 3.0)], ids=lambda e: f"eps{e[0]:g}-{e[1]:g}")
def constant_eps(request):
    return request.param


@pytest.fixture
def constant_pair(constant_eps):
    eps1, eps2 = constant_eps
    return GeneratorPair.constant(eps1, eps2, p_domain=(-50.0, 50.0), q_domain=(-50.0, 50.0))


@pytest.fixture
def random_pair():
    """
    Factory for generator pairs with F''' and G''' positive on their boxes.

    p lives in [0.1, 0.9] and q in [1.1, 2.0], so p < q and u > 0 everywhere.
    """
    def make(seed: int) -> GeneratorPair:
        gen = np.random.default_rng(seed)
        coeffs = []
        for _ in range(2):
            degree = int(gen.integers(3, 6))
            c = np.zeros(degree + 1)
            c[3] = gen.uniform(0.5, 2.0)
            c[4:] = gen.uniform(0.0, 0.05, degree - 3)
            coeffs.append(c)
        return GeneratorPair(poly(*coeffs[0]), poly(*coeffs[1]),
                             p_domain=(0.1, 0.9), q_domain=(1.1, 2.0)).validate()
    return make


@pytest.fixture(autouse=True)
def fresh_settings(monkeypatch):
    monkeypatch.delenv("DARBOUX_EMBED_THREADS", raising=False)
    monkeypatch.delenv("DARBOUX_EMBED_LOG_LEVEL", raising=False)
    reset_settings()
    yield
    reset_settings()
