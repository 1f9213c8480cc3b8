import numpy as np
import pytest

from rngbench import BitStream


@pytest.fixture
def rng():
    return np.random.default_rng(20260823)


def random_stream(rng, n: int) -> BitStream:
    return BitStream(rng.integers(0, 2, size=n, dtype=np.uint8))
