import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from banalg.algebra import Algebra
from banalg.bse import (
    SemisimplicityWarning,
    bse_norm_dual,
    bse_norm_primal,
    check_bse_property,
    delta_weak_bai,
    join_tau_rho,
    phi_tilde,
    sigma_extension,
    split_sigma,
    theta,
    theta_product_residual,
    verify_product_bse,
)
from banalg.constructions import SemidirectSpec, direct_sum, semidirect
from banalg.errors import (
    EmptyCharacterSetError,
    NotWithoutOrderError,
    PhiNotSurjectiveError,
    SpanConditionError,
)
from banalg.spectra import characters_lau, characters_numerical, characters_semidirect

from conftest import diagonal_algebra, lau_c_c2, pointwise_semidirect


def b_index(lc, values):
    """Index inside lc.b_chars of the character with the given value vector."""
    for j, ch in enumerate(lc.b_chars):
        if np.allclose(ch.values, values, atol=1e-8):
            return j
    raise AssertionError("character not found")


def test_bse_norm_pointwise_all_ones(c2):
    S = characters_numerical(c2)
    fn = bse_norm_primal(np.array([1.0, 1.0 + 0j]), S, c2)
    assert fn.bse_norm == pytest.approx(2.0)
    assert np.allclose(fn.minimizer.coeffs, [1.0, 1.0])
    assert fn.interpolation_error() <= 1e-12


def test_bse_norm_pointwise_indicator(c2):
    S = characters_numerical(c2)
    fn = bse_norm_primal(np.array([1.0, 0.0 + 0j]), S, c2)
    assert fn.bse_norm == pytest.approx(1.0)


def test_bse_norm_z2_fourier_inversion(z2):
    S = characters_numerical(z2)
    # order characters as rows of the character matrix; expected interpolant
    # by 2x2 Fourier inversion
    sigma = S.matrix[:, 1].copy()  # sigma(chi) = chi(delta_1): interpolant delta_1
    fn = bse_norm_primal(sigma, S, z2)
    assert fn.bse_norm == pytest.approx(1.0)
    assert np.allclose(fn.minimizer.coeffs, [0.0, 1.0], atol=1e-10)
    oracle = np.linalg.solve(S.matrix, sigma)
    assert np.allclose(oracle, fn.minimizer.coeffs)


def test_bse_dual_matches_primal(c2):
    S = characters_numerical(c2)
    value, cert = bse_norm_dual(np.array([1.0, 1.0 + 0j]), S, c2)
    assert value == pytest.approx(2.0, rel=1e-7)
    assert bse_norm_dual(np.zeros(2, dtype=complex), S, c2)[0] == 0


def test_dual_never_exceeds_primal_random(z2z2):
    S = characters_numerical(z2z2)
    rng = np.random.default_rng(0)
    for _ in range(10):
        sigma = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        fn = bse_norm_primal(sigma, S, z2z2)
        dual, _ = bse_norm_dual(sigma, S, z2z2)
        assert dual <= fn.bse_norm * (1 + 1e-9) + 1e-12
        assert abs(dual - fn.bse_norm) <= 1e-6 * max(1.0, fn.bse_norm)


def test_sup_norm_below_bse_norm(z2z2):
    S = characters_numerical(z2z2)
    rng = np.random.default_rng(1)
    for _ in range(10):
        sigma = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        fn = bse_norm_primal(sigma, S, z2z2)
        assert np.max(np.abs(sigma)) <= fn.bse_norm * (1 + 1e-9)


complex_val = st.complex_numbers(max_magnitude=10.0, allow_nan=False,
                                 allow_infinity=False)


@given(st.lists(complex_val, min_size=2, max_size=2),
       st.lists(complex_val, min_size=2, max_size=2),
       st.complex_numbers(max_magnitude=5.0, allow_nan=False, allow_infinity=False))
@settings(max_examples=30, deadline=None)
def test_bse_norm_is_a_norm(s1, s2, lam):
    alg = diagonal_algebra(2)
    S = characters_numerical(alg)
    f = lambda v: bse_norm_primal(np.array(v), S, alg).bse_norm
    n1, n2 = f(s1), f(s2)
    nsum = f(np.array(s1) + np.array(s2))
    assert nsum <= n1 + n2 + 1e-8 * max(1.0, n1 + n2)
    nl = f(lam * np.array(s1))
    assert nl == pytest.approx(abs(lam) * n1, rel=1e-9, abs=1e-9)


def test_delta_weak_bai(c2, z2):
    S = characters_numerical(c2)
    cert = delta_weak_bai(c2, S)
    assert cert.norm == pytest.approx(2.0)
    assert np.allclose(cert.element.coeffs, [1.0, 1.0])
    assert cert.norm <= c2.unit_element().norm + 1e-12
    S2 = characters_numerical(z2)
    cert = delta_weak_bai(z2, S2)
    assert cert.norm == pytest.approx(1.0)
    assert np.allclose(cert.element.coeffs, [1.0, 0.0], atol=1e-10)


def test_empty_character_set_raises(nilpotent2):
    with pytest.raises(EmptyCharacterSetError):
        delta_weak_bai(nilpotent2, characters_numerical(nilpotent2))


def test_check_bse_pointwise(c2):
    v = check_bse_property(c2)
    assert v.is_bse and v.semisimple
    assert v.gelfand_space_dim == v.multiplier_hat_dim == 2


def test_check_bse_group(z2z2):
    v = check_bse_property(z2z2)
    assert v.is_bse
    assert v.gelfand_space_dim == v.multiplier_hat_dim == 4


def test_check_bse_unital_semisimple_random():
    rng = np.random.default_rng(2)
    for n in (2, 3, 5):
        w = rng.uniform(1.0, 2.0, n)
        s = rng.uniform(0.5, w)
        c = np.zeros((n, n, n), dtype=complex)
        for i in range(n):
            c[i, i, i] = s[i]
        alg = Algebra(f"d{n}", w, c, unit=(1.0 / s).astype(complex))
        assert check_bse_property(alg).is_bse


def test_check_bse_requires_without_order(zero_product2):
    with pytest.raises(NotWithoutOrderError):
        check_bse_property(zero_product2)


def test_check_bse_nonsemisimple_warns():
    # C[x]/(x^3): unital (hence without order) but far from semisimple
    c = np.zeros((3, 3, 3), dtype=complex)
    for i in range(3):
        for j in range(3):
            if i + j < 3:
                c[i, j, i + j] = 1.0
    alg = Algebra("trunc3", np.ones(3), c, unit=np.eye(3, dtype=complex)[0])
    with pytest.warns(SemisimplicityWarning):
        v = check_bse_property(alg)
    assert not v.semisimple
    assert v.is_bse  # one character; multiplier hats already fill the line


def test_semisimplicity_warning_on_partial_characters(z2z2):
    S = characters_numerical(z2z2)
    from banalg.spectra import CharacterSet

    partial = CharacterSet(z2z2, list(S)[:2], provenance="numerical")
    with pytest.warns(SemisimplicityWarning):
        bse_norm_primal(np.array([1.0, 2.0 + 0j]), partial, z2z2)


def test_split_sigma_worked_example():
    lc = characters_lau(lau_c_c2())
    # sigma(E) = 5, sigma(0, pi1) = 2, sigma(0, pi2) = 3
    j1 = b_index(lc, [1.0, 0.0])
    j2 = b_index(lc, [0.0, 1.0])
    sigma = np.zeros(3, dtype=complex)
    sigma[0] = 5.0
    sigma[1 + j1] = 2.0
    sigma[1 + j2] = 3.0
    sp = split_sigma(sigma, lc)
    assert np.allclose(sp.tau.values, [3.0])
    rho = np.zeros(2, dtype=complex)
    rho[j1], rho[j2] = 2.0, 3.0
    assert np.allclose(sp.rho.values, rho)
    assert sp.tau.bse_norm == pytest.approx(3.0)
    assert sp.rho.bse_norm == pytest.approx(5.0)
    assert sp.sigma.bse_norm == pytest.approx(8.0)
    assert sp.norm_slack == pytest.approx(0.0, abs=1e-9)


def test_split_sigma_zero():
    lc = characters_lau(lau_c_c2())
    sp = split_sigma(np.zeros(3, dtype=complex), lc)
    assert sp.tau.bse_norm == 0 and sp.rho.bse_norm == 0


def test_join_inverts_split():
    lc = characters_lau(lau_c_c2())
    rng = np.random.default_rng(3)
    sigma = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    sp = split_sigma(sigma, lc)
    joined = join_tau_rho(sp.tau.values, sp.rho.values, lc)
    assert np.allclose(joined.sigma.values, sigma)
    # and split of join returns the same pair
    sp2 = split_sigma(joined.sigma.values, lc)
    assert np.allclose(sp2.tau.values, sp.tau.values)
    assert np.allclose(sp2.rho.values, sp.rho.values)


def test_theta_isometry_and_examples():
    lc = characters_lau(lau_c_c2())
    ones_a = np.ones(1, dtype=complex)
    # tau = all-ones, rho = 0: indicator of the E block
    th = theta(ones_a, np.zeros(2, dtype=complex), lc)
    expected = np.zeros(3, dtype=complex)
    expected[0] = 1.0
    assert np.allclose(th.sigma.values, expected)
    # rho = all-ones, tau = 0: all-ones on E u F
    th = theta(np.zeros(1, dtype=complex), np.ones(2, dtype=complex), lc)
    assert np.allclose(th.sigma.values, 1.0)
    rng = np.random.default_rng(4)
    for _ in range(10):
        tau = rng.standard_normal(1) + 1j * rng.standard_normal(1)
        rho = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        th = theta(tau, rho, lc)
        assert th.isometry_defect <= 1e-9
        assert th.sigma.bse_norm == pytest.approx(
            th.tau.bse_norm + th.rho.bse_norm, abs=1e-9
        )


def test_theta_multiplicative():
    lc = characters_lau(lau_c_c2())
    rng = np.random.default_rng(5)
    for _ in range(10):
        res = theta_product_residual(
            lc,
            rng.standard_normal(1) + 1j * rng.standard_normal(1),
            rng.standard_normal(2) + 1j * rng.standard_normal(2),
            rng.standard_normal(1) + 1j * rng.standard_normal(1),
            rng.standard_normal(2) + 1j * rng.standard_normal(2),
        )
        assert res <= 1e-12


def test_phi_tilde():
    lc = characters_lau(lau_c_c2())
    assert np.allclose(phi_tilde(np.ones(2, dtype=complex), lc).values, 1.0)
    j1 = b_index(lc, [1.0, 0.0])
    j2 = b_index(lc, [0.0, 1.0])
    rho = np.zeros(2, dtype=complex)
    rho[j1], rho[j2] = 2.0, 3.0
    pulled = phi_tilde(rho, lc)
    assert np.allclose(pulled.values, [2.0])  # Gamma(id) = pi1
    assert pulled.bse_norm == pytest.approx(2.0)
    rho_fn = bse_norm_primal(rho, lc.b_chars, lc.descriptor.second)
    assert pulled.bse_norm <= rho_fn.bse_norm + 1e-9


def test_phi_tilde_contractive_random():
    lc = characters_lau(lau_c_c2())
    rng = np.random.default_rng(6)
    for _ in range(10):
        rho = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        pulled = phi_tilde(rho, lc)
        rho_fn = bse_norm_primal(rho, lc.b_chars, lc.descriptor.second)
        assert pulled.bse_norm <= rho_fn.bse_norm + 1e-9
        # homomorphism law pointwise
        rho2 = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        lhs = phi_tilde(rho * rho2, lc).values
        assert np.allclose(lhs, pulled.values * phi_tilde(rho2, lc).values)


def test_split_requires_surjective_phi():
    ds = direct_sum(diagonal_algebra(1, "A"), diagonal_algebra(2, "B"))
    lc = characters_lau(ds)
    with pytest.raises(PhiNotSurjectiveError):
        split_sigma(np.zeros(3, dtype=complex), lc)
    with pytest.raises(PhiNotSurjectiveError):
        phi_tilde(np.zeros(2, dtype=complex), lc)


def test_sigma_extension_pointwise():
    sdc = characters_semidirect(pointwise_semidirect())
    ext = sigma_extension(np.array([2.0 + 0j]), sdc)
    assert np.allclose(ext.sigma.values, 2.0)
    assert ext.sigma.bse_norm <= ext.rho.bse_norm + 1e-9
    assert ext.rho.bse_norm == pytest.approx(2.0)
    assert ext.witness_error <= 1e-12
    # the lifted witness (b, 0) has the subalgebra norm
    assert ext.witness.norm == pytest.approx(ext.rho.bse_norm)
    # all-ones and zero cases
    ext = sigma_extension(np.ones(1, dtype=complex), sdc)
    assert np.allclose(ext.sigma.values, 1.0)
    ext = sigma_extension(np.zeros(1, dtype=complex), sdc)
    assert ext.sigma.bse_norm == 0


def test_sigma_extension_requires_span():
    B = diagonal_algebra(1, "B")
    I = diagonal_algebra(1, "I")
    desc = semidirect(SemidirectSpec(B, I, np.zeros((1, 1, 1)), np.zeros((1, 1, 1))))
    sdc = characters_semidirect(desc)
    with pytest.raises(SpanConditionError):
        sigma_extension(np.ones(1, dtype=complex), sdc)


def test_verify_product_bse_direct_sum():
    rep = verify_product_bse(direct_sum(diagonal_algebra(1, "A"),
                                        diagonal_algebra(2, "B")))
    assert rep.biconditional_ok
    assert rep.verdict_first.is_bse and rep.verdict_second.is_bse
    assert rep.verdict_product.is_bse
    assert rep.sum_block_dim_ok
    assert rep.sum_block_residual <= 1e-10


def test_verify_product_bse_lau_transport():
    rep = verify_product_bse(lau_c_c2())
    assert rep.biconditional_ok
    assert rep.transport_dim_ok
    assert rep.transport_membership <= 1e-10
    assert rep.transport_hat_residual <= 1e-9


def test_containment_certificate_helper():
    # on artificially different subspaces the comparison yields a witness
    from banalg.bse import _containment_residual, _orthonormal_rows

    plane = _orthonormal_rows(np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]],
                                       dtype=complex))
    line = _orthonormal_rows(np.array([[0.0, 0.0, 1.0]], dtype=complex))
    res, witness = _containment_residual(line, plane)
    assert res == pytest.approx(1.0)
    assert np.allclose(np.abs(witness), [0.0, 0.0, 1.0])  # witness is per-phase
    res, _ = _containment_residual(plane[:1], plane)
    assert res <= 1e-12


def test_theta_reports_product_law():
    lc = characters_lau(lau_c_c2())
    th = theta(np.array([1.0 + 2.0j]), np.array([0.5, -1.0j]), lc)
    assert th.product_law_residual <= 1e-12


def test_multiplier_hats_inside_interpolable_functions(z2z2):
    # whenever the identity certificate exists, multiplier hats are
    # interpolable (here: both spaces are everything)
    from banalg.multipliers import hat, multiplier_space

    S = characters_numerical(z2z2)
    delta_weak_bai(z2z2, S)  # succeeds with finite norm
    E = S.matrix
    for T in multiplier_space(z2z2).basis:
        h = hat(T, S)
        a, *_ = np.linalg.lstsq(E, h, rcond=None)
        assert np.max(np.abs(E @ a - h)) <= 1e-9
