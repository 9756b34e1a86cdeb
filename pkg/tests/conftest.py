import numpy as np
import pytest

from banalg.algebra import Algebra, LinearMap
from banalg.constructions import (
    SemidirectSpec,
    finite_abelian_group_algebra,
    lau_product,
    semidirect,
)


def diagonal_algebra(n, name="pointwise", weights=None):
    c = np.zeros((n, n, n), dtype=complex)
    for i in range(n):
        c[i, i, i] = 1.0
    w = np.ones(n) if weights is None else np.asarray(weights, dtype=float)
    return Algebra(name, w, c, unit=np.ones(n, dtype=complex))


@pytest.fixture
def c2():
    return diagonal_algebra(2, "C2")


@pytest.fixture
def nilpotent2():
    # e0 e0 = e1, every other product zero
    c = np.zeros((2, 2, 2), dtype=complex)
    c[0, 0, 1] = 1.0
    return Algebra("nil2", np.ones(2), c)


@pytest.fixture
def zero_product2():
    return Algebra("zero2", np.ones(2), np.zeros((2, 2, 2), dtype=complex))


@pytest.fixture
def z2():
    return finite_abelian_group_algebra([2])


@pytest.fixture
def z3():
    return finite_abelian_group_algebra([3])


@pytest.fixture
def z2z2():
    return finite_abelian_group_algebra([2, 2])


def pointwise_semidirect():
    """B = span{(b, b)} and I = span{(a, 0)} inside pointwise C^2.

    Abstract structure: f0 f0 = f0, f0 f1 = f1 f0 = f1, f1 f1 = f1, with
    (b, a) <-> b + a identifying the assembled algebra with C^2.
    """
    one = np.ones((1, 1, 1), dtype=complex)
    B = Algebra("Bfix", np.ones(1), one, unit=np.ones(1, dtype=complex))
    I = Algebra("Ifix", np.ones(1), one.copy())
    act = np.ones((1, 1, 1), dtype=complex)
    return semidirect(SemidirectSpec(B, I, act, act.copy()))


@pytest.fixture
def sd_pointwise():
    return pointwise_semidirect()


def lau_c_c2():
    """A = C, B = C^2, phi(b1, b2) = b1: the 3-dimensional worked example."""
    A = diagonal_algebra(1, "Afix")
    B = diagonal_algebra(2, "Bfix2")
    phi = LinearMap(B, A, np.array([[1.0, 0.0]], dtype=complex))
    return lau_product(A, B, phi)


@pytest.fixture
def lau_fixture_small():
    return lau_c_c2()
