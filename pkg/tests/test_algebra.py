import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from banalg.algebra import (
    Algebra,
    LinearMap,
    dual_norm,
    left_mult_operator,
    operator_norm,
    validate,
)
from banalg.errors import AlgebraMismatchError, ValidationRejected

from conftest import diagonal_algebra


def test_validate_pointwise_accepted(c2):
    report = validate(c2)
    assert report.accepted
    assert report.max_associativity_residual == 0
    assert report.max_commutativity_residual == 0
    assert report.max_submultiplicativity_excess == 0
    assert report.unit_residual == 0


def test_validate_rejects_asymmetric_tensor():
    c = np.zeros((2, 2, 2), dtype=complex)
    c[0, 1, 0] = 1.0  # c[1,0,0] stays 0
    alg = Algebra("asym", np.ones(2), c)
    report = validate(alg)
    assert not report.accepted
    assert "commutativity" in report.failures


def test_validate_nilpotent_by_direct_contraction(nilpotent2):
    # oracle: contract (e_i e_j) e_k and e_i (e_j e_k) over all 8 triples by hand
    c = nilpotent2.structure
    worst = 0.0
    for i in range(2):
        for j in range(2):
            for k in range(2):
                left = sum(c[i, j, m] * c[m, k, :] for m in range(2))
                right = sum(c[j, k, m] * c[i, m, :] for m in range(2))
                worst = max(worst, np.max(np.abs(left - right)))
    assert worst == 0
    report = validate(nilpotent2)
    assert report.accepted
    # ||e0 e0|| = ||e1|| = 1 <= w0 * w0
    assert report.max_submultiplicativity_excess <= 0


def test_validate_bad_unit():
    c = np.zeros((1, 1, 1), dtype=complex)
    c[0, 0, 0] = 1.0
    alg = Algebra("badunit", np.ones(1), c, unit=np.array([2.0 + 0j]))
    assert "unit" in validate(alg).failures


def test_require_valid_raises():
    c = np.zeros((2, 2, 2), dtype=complex)
    c[0, 1, 0] = 1.0
    alg = Algebra("asym", np.ones(2), c)
    from banalg.algebra import require_valid

    with pytest.raises(ValidationRejected, match="commutativity"):
        require_valid(alg)


def test_multiply_pointwise(c2):
    a = c2.element([1, 2])
    b = c2.element([3, 4])
    assert np.allclose((a * b).coeffs, [3, 8])


def test_multiply_nilpotent(nilpotent2):
    e0 = nilpotent2.basis_element(0)
    e1 = nilpotent2.basis_element(1)
    assert np.allclose((e0 * e0).coeffs, e1.coeffs)
    assert np.allclose((e0 * e1).coeffs, 0)


def test_multiply_group_law(z2):
    d1 = z2.basis_element(1)
    assert np.allclose((d1 * d1).coeffs, z2.basis_element(0).coeffs)


def test_multiply_mismatch(c2, z2):
    with pytest.raises(AlgebraMismatchError):
        c2.basis_element(0) * z2.basis_element(0)


def test_norms(c2):
    a = c2.element([3, -4j])
    assert a.norm == pytest.approx(7.0)
    w = diagonal_algebra(2, weights=[2.0, 1.0])
    assert dual_norm(np.array([2.0, 3.0]), w) == pytest.approx(3.0)
    assert c2.zero().norm == 0
    assert dual_norm(np.zeros(2), c2) == 0


def test_operator_norm_identity(c2):
    assert operator_norm(LinearMap.identity(c2)) == pytest.approx(1.0)


def test_operator_norm_embedding(c2):
    A = diagonal_algebra(1)
    phi = LinearMap(A, c2, np.array([[1.0], [0.0]], dtype=complex))
    assert operator_norm(phi) == pytest.approx(1.0)


def test_operator_norm_diagonal_embedding_brute_force(c2):
    A = diagonal_algebra(1)
    phi = LinearMap(A, c2, np.array([[1.0], [1.0]], dtype=complex))
    assert operator_norm(phi) == pytest.approx(2.0)
    # oracle: maximize ||phi(b)|| / ||b|| over random b
    rng = np.random.default_rng(0)
    best = 0.0
    for _ in range(500):
        b = rng.standard_normal(1) + 1j * rng.standard_normal(1)
        best = max(best, c2.norm_coeffs(phi.matrix @ b) / A.norm_coeffs(b))
    assert best == pytest.approx(2.0, abs=1e-12)


def test_left_mult_operator(c2, nilpotent2):
    assert np.allclose(left_mult_operator(c2.unit_element()).matrix, np.eye(2))
    assert np.allclose(
        left_mult_operator(c2.element([2, 5])).matrix, np.diag([2.0, 5.0])
    )
    M = left_mult_operator(nilpotent2.basis_element(0)).matrix
    expected = np.zeros((2, 2))
    expected[1, 0] = 1.0  # e0 . e0 = e1
    assert np.allclose(M, expected)


complex_coeff = st.complex_numbers(
    max_magnitude=1e3, allow_nan=False, allow_infinity=False
)


@given(st.lists(complex_coeff, min_size=2, max_size=2),
       st.lists(complex_coeff, min_size=2, max_size=2),
       st.lists(complex_coeff, min_size=2, max_size=2))
@settings(max_examples=60)
def test_multiply_bilinear_commutative(xs, ys, zs):
    alg = diagonal_algebra(2)
    a, b, c = alg.element(xs), alg.element(ys), alg.element(zs)
    assert np.allclose(((a + b) * c).coeffs, (a * c + b * c).coeffs)
    assert np.allclose((a * b).coeffs, (b * a).coeffs)
    assert np.allclose(((a * b) * c).coeffs, (a * (b * c)).coeffs)


@given(st.lists(complex_coeff, min_size=3, max_size=3),
       st.lists(complex_coeff, min_size=3, max_size=3))
@settings(max_examples=60)
def test_submultiplicative_on_group_algebra(xs, ys):
    from banalg.constructions import finite_abelian_group_algebra

    alg = finite_abelian_group_algebra([3])
    a, b = alg.element(xs), alg.element(ys)
    assert (a * b).norm <= a.norm * b.norm + 1e-9 * max(1.0, a.norm * b.norm)


@given(st.lists(complex_coeff, min_size=2, max_size=2))
@settings(max_examples=60)
def test_dual_norm_is_exact_dual(fs):
    alg = diagonal_algebra(2, weights=[1.5, 0.5])
    f = np.array(fs)
    dn = dual_norm(f, alg)
    rng = np.random.default_rng(1)
    for _ in range(20):
        a = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        assert abs(f @ a) <= dn * alg.norm_coeffs(a) + 1e-9
    # equality is attained at a basis direction
    i = int(np.argmax(np.abs(f) / alg.weights))
    a = np.zeros(2, dtype=complex)
    a[i] = 1.0
    assert abs(f @ a) == pytest.approx(dn * alg.norm_coeffs(a))


@given(st.lists(complex_coeff, min_size=4, max_size=4),
       st.lists(complex_coeff, min_size=4, max_size=4))
@settings(max_examples=40)
def test_left_mult_matches_multiply(xs, ys):
    from banalg.constructions import finite_abelian_group_algebra

    alg = finite_abelian_group_algebra([4])
    a, b = alg.element(xs), alg.element(ys)
    assert np.allclose(left_mult_operator(a)(b).coeffs, (a * b).coeffs)
