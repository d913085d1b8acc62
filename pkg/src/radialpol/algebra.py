"""Small fixed-size matrix primitives shared by every other module.

Tensor ordering convention (used everywhere in the package): in a product
``kron(a, b)`` the polarization factor comes first and the spatial factor
second, so the row index of a 4x4 operator is ``2 * i_pol + i_spa``. This
matches amplitude vectors ordered ``[A00, A01, A10, A11]``.
"""

import numpy as np

DET_THRESHOLD = 1e-12
ATOL = 1e-10


class SingularMatrix(ValueError):
    """Raised when a matrix is too close to singular to invert."""


_PAULI = (
    np.array([[1, 0], [0, 1]], dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)
for _s in _PAULI:
    _s.setflags(write=False)

I2 = _PAULI[0]
I4 = np.eye(4, dtype=complex)
I4.setflags(write=False)


def pauli(mu):
    """Return the Pauli matrix sigma_mu, with sigma_0 the identity.

    Note the labelling: sigma_1 is the off-diagonal real matrix, sigma_2 the
    imaginary one and sigma_3 = diag(1, -1).
    """
    if mu not in (0, 1, 2, 3):
        raise IndexError(f"Pauli index must be 0..3, got {mu!r}")
    return _PAULI[mu].copy()


def kron(a, b):
    """Kronecker product with ``a`` acting on the polarization slot."""
    return np.kron(np.asarray(a), np.asarray(b))


def invert4(m, tol=DET_THRESHOLD):
    """Invert a 4x4 matrix by Gauss-Jordan elimination with partial pivoting.

    Parameters
    ----------
    m : array_like, shape (4, 4)
    tol : float
        Singularity threshold on ``|det(m)|``.

    Raises
    ------
    SingularMatrix
        If ``|det(m)| < tol``.
    """
    a = np.array(m, dtype=np.result_type(np.asarray(m).dtype, float))
    if a.shape != (4, 4):
        raise ValueError(f"expected a 4x4 matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    n = 4
    aug = np.concatenate([a, np.eye(n, dtype=a.dtype)], axis=1)
    det = 1.0
    for col in range(n):
        piv = col + int(np.argmax(np.abs(aug[col:, col])))
        if piv != col:
            aug[[col, piv]] = aug[[piv, col]]
            det = -det
        p = aug[col, col]
        det = det * p
        if p == 0:
            break
        aug[col] = aug[col] / p
        for row in range(n):
            if row != col:
                aug[row] = aug[row] - aug[row, col] * aug[col]
    if abs(det) < tol:
        raise SingularMatrix(f"|det| = {abs(det):.3e} is below threshold {tol:.1e}")
    return aug[:, n:]


def det4(m):
    """Determinant via LU; only used for diagnostics."""
    return np.linalg.det(np.asarray(m))


def dagger(a):
    return np.conj(np.swapaxes(a, -1, -2))


def is_hermitian(a, atol=1e-12):
    a = np.asarray(a)
    return bool(np.allclose(a, dagger(a), rtol=0, atol=atol))


def close(a, b, atol=ATOL):
    """Elementwise absolute-tolerance comparison."""
    return bool(np.allclose(a, b, rtol=0, atol=atol))
