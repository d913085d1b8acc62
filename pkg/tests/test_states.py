import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from radialpol.algebra import kron, pauli
from radialpol.rng import make_rng
from radialpol.states import (
    KET_0,
    KET_1,
    KET_L,
    KET_PLUS,
    LAMBDA,
    amplitude_matrix,
    coherency_of,
    is_psd,
    phase_distance,
    product_beam,
    radial_beam,
    reduce_pol,
    reduce_spa,
    rho_from_stokes,
    rho_from_two_dof_stokes,
    schmidt_coefficients,
    stokes_of,
    two_dof_stokes,
)

from conftest import random_complex, random_pure, random_rho

R2 = 1 / np.sqrt(2)


def test_radial_beam():
    np.testing.assert_allclose(radial_beam(), np.array([1, 0, 0, 1]) * R2, atol=0)
    assert abs(np.linalg.norm(radial_beam()) - 1) < 1e-15


def test_radial_coherency_matrix():
    expected = 0.5 * np.array([[1, 0, 0, 1], [0, 0, 0, 0], [0, 0, 0, 0], [1, 0, 0, 1]])
    np.testing.assert_allclose(coherency_of(radial_beam()), expected, atol=1e-15)


def test_coherency_examples():
    np.testing.assert_array_equal(coherency_of([1, 0, 0, 0]), np.diag([1, 0, 0, 0]))
    rho = coherency_of(np.array([1, 1, 0, 0]) * R2)
    expected = np.zeros((4, 4))
    expected[:2, :2] = 0.5
    np.testing.assert_allclose(rho, expected, atol=1e-15)
    assert abs(np.trace(rho) - 1) < 1e-15
    assert np.linalg.matrix_rank(rho) == 1


def test_reductions_of_radial_and_product():
    rho = coherency_of(radial_beam())
    np.testing.assert_allclose(reduce_pol(rho), np.eye(2) / 2, atol=1e-15)
    np.testing.assert_allclose(reduce_spa(rho), np.eye(2) / 2, atol=1e-15)
    h = coherency_of([1, 0, 0, 0])
    np.testing.assert_array_equal(reduce_pol(h), np.diag([1, 0]))
    np.testing.assert_array_equal(reduce_spa(h), np.diag([1, 0]))


def test_reductions_match_reshape_oracle(rng):
    for _ in range(20):
        e = random_pure(rng)
        a = e.reshape(2, 2)  # A[i_pol, j_spa], built without amplitude_matrix
        rho = coherency_of(e)
        np.testing.assert_allclose(reduce_pol(rho), a @ a.conj().T, atol=1e-14)
        np.testing.assert_allclose(reduce_spa(rho), (a.conj().T @ a).T, atol=1e-14)


def test_reductions_distinguish_slots():
    # e_x (x) psi01: polarization horizontal, mode psi01
    rho = coherency_of(product_beam(KET_0, KET_1))
    np.testing.assert_array_equal(reduce_pol(rho), np.diag([1, 0]))
    np.testing.assert_array_equal(reduce_spa(rho), np.diag([0, 1]))


def test_stokes_examples():
    np.testing.assert_allclose(stokes_of(np.eye(2) / 2), [1, 0, 0, 0], atol=1e-15)
    # horizontal: H/V contrast sits in S3 with this Pauli ordering
    np.testing.assert_allclose(stokes_of(np.diag([1, 0])), [1, 0, 0, 1], atol=1e-15)
    np.testing.assert_allclose(stokes_of(np.outer(KET_L, KET_L.conj())), [1, 0, 1, 0], atol=1e-15)
    np.testing.assert_allclose(stokes_of(np.outer(KET_PLUS, KET_PLUS.conj())), [1, 1, 0, 0], atol=1e-15)


def test_two_dof_stokes_examples():
    np.testing.assert_allclose(two_dof_stokes(coherency_of(radial_beam())), np.diag(LAMBDA), atol=1e-15)
    s = two_dof_stokes(coherency_of([1, 0, 0, 0]))
    s_h = stokes_of(np.diag([1, 0]))  # e_x
    s_10 = stokes_of(np.diag([1, 0]))  # psi10
    np.testing.assert_allclose(s, np.outer(s_h, s_10), atol=1e-15)


def test_two_dof_stokes_brute_force(rng):
    for _ in range(10):
        rho = random_rho(rng)
        brute = np.empty((4, 4))
        for mu in range(4):
            for nu in range(4):
                brute[mu, nu] = np.trace(rho @ np.kron(pauli(mu), pauli(nu))).real
        np.testing.assert_allclose(two_dof_stokes(rho), brute, atol=1e-13)


def _random_hermitian(rng, n):
    z = random_complex(rng, (n, n))
    return z + z.conj().T


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32))
def test_liouville_roundtrips(seed):
    rng = make_rng(seed)
    h2 = _random_hermitian(rng, 2)
    np.testing.assert_allclose(rho_from_stokes(stokes_of(h2)), h2, atol=1e-13)
    h4 = _random_hermitian(rng, 4)
    np.testing.assert_allclose(rho_from_two_dof_stokes(two_dof_stokes(h4)), h4, atol=1e-13)
    s = rng.standard_normal(4)
    np.testing.assert_allclose(stokes_of(rho_from_stokes(s)), s, atol=1e-13)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32))
def test_trace_preservation(seed):
    rho = random_rho(make_rng(seed)) * 3.7
    t = np.trace(rho)
    assert abs(np.trace(reduce_pol(rho)) - t) < 1e-12
    assert abs(np.trace(reduce_spa(rho)) - t) < 1e-12
    assert is_psd(reduce_pol(rho)) and is_psd(reduce_spa(rho))


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32))
def test_schmidt_spectra_match_for_pure_states(seed):
    rho = coherency_of(random_pure(make_rng(seed)))
    ev_pol = np.linalg.eigvalsh(reduce_pol(rho))
    ev_spa = np.linalg.eigvalsh(reduce_spa(rho))
    np.testing.assert_allclose(ev_pol, ev_spa, atol=1e-10)


def test_full_polarization_iff_rank_one(rng):
    # rank-1 polarization: product state
    e = kron(random_pure(rng)[:2] / np.linalg.norm(random_pure(rng)[:2]), [1, 0])
    s = stokes_of(reduce_pol(coherency_of(e)))
    assert abs(s[1] ** 2 + s[2] ** 2 + s[3] ** 2 - s[0] ** 2) < 1e-10
    # entangled: partially polarized
    s = stokes_of(reduce_pol(coherency_of(random_pure(rng))))
    assert s[1] ** 2 + s[2] ** 2 + s[3] ** 2 < s[0] ** 2 - 1e-6


def test_schmidt_coefficients():
    np.testing.assert_allclose(schmidt_coefficients(radial_beam()), (R2, R2), atol=1e-15)
    np.testing.assert_allclose(schmidt_coefficients(product_beam(KET_PLUS, KET_L)), (1, 0), atol=1e-15)
    np.testing.assert_allclose(schmidt_coefficients(np.ones(4) / 2), (1, 0), atol=1e-15)


def test_schmidt_normalization(rng):
    s1, s2 = schmidt_coefficients(random_pure(rng))
    assert s1 >= s2 >= 0
    assert abs(s1**2 + s2**2 - 1) < 1e-12


def test_amplitude_matrix_layout():
    np.testing.assert_array_equal(amplitude_matrix([1, 2, 3, 4]), [[1, 2], [3, 4]])


def test_phase_distance(rng):
    e = random_pure(rng)
    assert phase_distance(e, np.exp(0.7j) * e) < 1e-15
    assert phase_distance(e, -e) < 1e-15
    assert phase_distance([1, 0, 0, 0], [0, 1, 0, 0]) == pytest.approx(np.sqrt(2))


def test_coherency_rejects_wrong_length():
    with pytest.raises(ValueError):
        coherency_of([1, 0, 0])
