import numpy as np
import pytest

from condexp import FiniteMeasureSpace, MeasurableFunction, SubSigmaAlgebra


@pytest.fixture
def two_point_space():
    return FiniteMeasureSpace([1.0, 1.0])


@pytest.fixture
def one_block_algebra():
    return SubSigmaAlgebra(([0, 1],), 2)


def make_function(space, values):
    return MeasurableFunction(np.asarray(values, dtype=complex), space)


def multiset_close(a, b, tol):
    """Greedy matching of two complex multisets up to tol."""
    a = sorted(np.asarray(a, dtype=complex), key=lambda z: (z.real, z.imag))
    b = list(np.asarray(b, dtype=complex))
    if len(a) != len(b):
        return False
    for x in a:
        dists = [abs(x - y) for y in b]
        j = int(np.argmin(dists))
        if dists[j] > tol:
            return False
        b.pop(j)
    return True
