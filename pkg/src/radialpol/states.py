"""Beam states in the polarization x first-order-mode (two-qubit) picture.

A beam is an amplitude 4-vector ``[A00, A01, A10, A11]`` on the basis
``e_x psi10, e_x psi01, e_y psi10, e_y psi01``. The first index is the
polarization qubit, the second the spatial qubit.

Stokes ordering
---------------
Stokes components follow the Pauli labels of :func:`radialpol.algebra.pauli`:

* ``S1`` : diagonal / antidiagonal contrast (sigma_1)
* ``S2`` : left / right circular contrast (sigma_2)
* ``S3`` : horizontal / vertical contrast (sigma_3)

This is *not* the usual optics convention where S1 is H/V. A horizontally
polarized beam has ``S = (1, 0, 0, 1)``.
"""

import numpy as np

from .algebra import dagger, kron, pauli

SQRT1_2 = 1 / np.sqrt(2)

# single-qubit kets; identical for polarization and spatial qubits
KET_0 = np.array([1, 0], dtype=complex)
KET_1 = np.array([0, 1], dtype=complex)
KET_PLUS = np.array([1, 1], dtype=complex) * SQRT1_2
KET_MINUS = np.array([1, -1], dtype=complex) * SQRT1_2
KET_L = np.array([1, 1j], dtype=complex) * SQRT1_2
KET_R = np.array([1, -1j], dtype=complex) * SQRT1_2

# analyzer / mode-selector basis, labelled 0..3
BASIS_KETS = (KET_0, KET_1, KET_PLUS, KET_L)

# S_{mu nu} of the radial beam is diag(LAMBDA)
LAMBDA = np.array([1.0, 1.0, -1.0, 1.0])


def radial_beam():
    """Amplitudes of the unit-power radially polarized beam, (|00> + |11>)/sqrt(2)."""
    return np.array([1, 0, 0, 1], dtype=complex) * SQRT1_2


def product_beam(pol, spa):
    """Separable beam ``pol (x) spa`` from two single-qubit kets."""
    return kron(np.asarray(pol, dtype=complex), np.asarray(spa, dtype=complex))


def amplitude_matrix(e):
    """Reshape amplitudes into the 2x2 matrix A with A[i_pol, j_spa]."""
    return np.asarray(e, dtype=complex).reshape(2, 2)


def norm2(e):
    return float(np.vdot(e, e).real)


def is_normalized(e, atol=1e-12):
    return abs(norm2(e) - 1.0) <= atol


def phase_distance(e1, e2):
    """``min_phi ||e1 - exp(i phi) e2||``, i.e. distance up to global phase."""
    e1 = np.ravel(e1)
    e2 = np.ravel(e2)
    overlap = abs(np.vdot(e2, e1))
    d2 = norm2(e1) + norm2(e2) - 2 * overlap
    return float(np.sqrt(max(d2, 0.0)))


def coherency_of(e):
    """Pure-state 4x4 coherency matrix ``rho_kl = a_k conj(a_l)``."""
    e = np.asarray(e, dtype=complex).ravel()
    if e.shape != (4,):
        raise ValueError(f"expected 4 amplitudes, got shape {e.shape}")
    return np.outer(e, e.conj())


def reduce_pol(rho):
    """Trace out the spatial qubit, leaving the 2x2 polarization coherency matrix."""
    r = np.asarray(rho).reshape(2, 2, 2, 2)
    return np.einsum("ijkj->ik", r)


def reduce_spa(rho):
    """Trace out the polarization qubit, leaving the 2x2 spatial coherency matrix.

    For a pure state this equals ``(A^dagger A)^T``.
    """
    r = np.asarray(rho).reshape(2, 2, 2, 2)
    return np.einsum("ijil->jl", r)


def stokes_of(rho2):
    """Single-DoF Stokes vector ``S_mu = tr(rho2 sigma_mu)``."""
    rho2 = np.asarray(rho2)
    return np.array([np.trace(rho2 @ pauli(mu)).real for mu in range(4)])


def rho_from_stokes(s):
    """Inverse of :func:`stokes_of`: ``rho = (1/2) sum_mu S_mu sigma_mu``."""
    return 0.5 * sum(s[mu] * pauli(mu) for mu in range(4))


_PAULI_PAIRS = np.array(
    [[kron(pauli(mu), pauli(nu)) for nu in range(4)] for mu in range(4)]
)


def two_dof_stokes(rho):
    """Two-DoF Stokes matrix ``S_{mu nu} = tr[rho (sigma_mu (x) sigma_nu)]``.

    Row index ``mu`` refers to polarization, column ``nu`` to the spatial mode.
    """
    rho = np.asarray(rho)
    return np.einsum("mnab,ba->mn", _PAULI_PAIRS, rho).real


def rho_from_two_dof_stokes(s):
    """Rebuild ``rho = (1/4) sum S_{mu nu} sigma_mu (x) sigma_nu``."""
    return 0.25 * np.einsum("mn,mnab->ab", np.asarray(s), _PAULI_PAIRS)


def schmidt_coefficients(e):
    """Descending Schmidt coefficients of a pure two-qubit beam.

    ``(1, 0)`` means polarization and spatial mode are separable; ``(1/sqrt 2,
    1/sqrt 2)`` is maximal (classical) entanglement, as for the radial beam.
    """
    sv = np.linalg.svd(amplitude_matrix(e), compute_uv=False)
    return float(sv[0]), float(sv[1])


def is_psd(rho, floor=-1e-10):
    rho = np.asarray(rho)
    herm = 0.5 * (rho + dagger(rho))
    return bool(np.linalg.eigvalsh(herm).min() >= floor)
