import numpy as np
import pytest
from scipy.optimize import linear_sum_assignment

from majorana.states import Constellation


def match_stars(a: Constellation, b: Constellation) -> float:
    """Largest chordal mismatch under the best pairing of two star multisets."""
    va, vb = a.unit_vectors(), b.unit_vectors()
    cost = np.linalg.norm(va[:, None, :] - vb[None, :, :], axis=2)
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())


@pytest.fixture
def rng():
    return np.random.default_rng(20260808)
