"""Mueller matrix estimation.

Three routes to the same 4x4 matrix:

* :func:`mueller_from_jones` computes it directly from a Jones matrix (the oracle);
* :func:`conventional_reconstruct` probes the sample sequentially with four
  polarization states and inverts ``V' = M V``;
* :func:`two_dof_reconstruct` reads it off the 16 polarization-mode
  correlations of a single radially polarized probe.
"""

from dataclasses import dataclass

import numpy as np

from .algebra import SingularMatrix, dagger, invert4, kron, pauli
from .elements import F, apply_to_pol, projector
from .states import BASIS_KETS, LAMBDA, coherency_of, radial_beam, stokes_of, two_dof_stokes


class RankDeficient(SingularMatrix):
    """Probe states do not span the four-dimensional Stokes space."""


_SIGMA = np.array([pauli(mu) for mu in range(4)])
_E = np.array([projector(mu) for mu in range(4)])
_E_PAIRS = np.array([[kron(_E[a], _E[b]) for b in range(4)] for a in range(4)])


def mueller_from_jones(t):
    """``M[mu, nu] = tr(sigma_mu T sigma_nu T^dagger) / 2``.

    Accepts a single 2x2 matrix or a stack of shape (..., 2, 2).
    """
    t = np.asarray(t, dtype=complex)
    td = dagger(t)
    m = 0.5 * np.einsum("mab,...bc,ncd,...da->...mn", _SIGMA, t, _SIGMA, td)
    if np.max(np.abs(m.imag), initial=0.0) > 1e-12 * max(1.0, np.max(np.abs(m.real), initial=0.0)):
        raise ArithmeticError("Mueller matrix has a non-negligible imaginary part")
    return m.real


def mueller_depolarizing(ens):
    """Ensemble-averaged Mueller matrix of a depolarizing sample.

    Summation runs in member order, so the result is reproducible.
    """
    ms = mueller_from_jones(ens.jones)
    return np.einsum("k,kmn->mn", ens.weights, ms)


@dataclass(frozen=True)
class ProbeSet:
    """Four probe polarizations and the matrix V whose columns are their Stokes vectors."""

    kets: tuple
    v: np.ndarray

    @classmethod
    def from_kets(cls, kets):
        kets = tuple(np.asarray(k, dtype=complex) for k in kets)
        if len(kets) != 4:
            raise ValueError("a probe set has exactly four states")
        v = np.column_stack([stokes_of(np.outer(k, k.conj())) for k in kets])
        return cls(kets, v)


def conventional_probe_set():
    """Horizontal, vertical, diagonal and left-circular probes."""
    return ProbeSet.from_kets(BASIS_KETS)


def conventional_reconstruct(t, probes=None):
    """Sequential four-probe estimate ``M = V' V^-1`` for a known sample ``t``."""
    probes = probes or conventional_probe_set()
    t = np.asarray(t, dtype=complex)
    vp = np.column_stack(
        [stokes_of(t @ np.outer(k, k.conj()) @ dagger(t)) for k in probes.kets]
    )
    return vp @ invert4(probes.v)


def conventional_readings(t, probes=None):
    """Analyzer intensities of the sequential scheme, ``J[beta, alpha] = tr(T rho_alpha T^+ E_beta)``.

    ``alpha`` labels the probe, ``beta`` the analyzer projector.
    """
    probes = probes or conventional_probe_set()
    t = np.asarray(t, dtype=complex)
    out = np.empty((4, 4))
    for a, k in enumerate(probes.kets):
        tk = t @ k
        for b in range(4):
            out[b, a] = np.vdot(tk, _E[b] @ tk).real
    return out


def conventional_from_readings(j, probes=None):
    """Mueller estimate from the 16 sequential analyzer readings."""
    probes = probes or conventional_probe_set()
    return (F @ np.asarray(j)) @ invert4(probes.v)


def abstract_intensities(rho):
    """Ideal detector intensities ``I[alpha, beta] = tr[rho (E_alpha (x) E_beta)]``.

    ``alpha`` is the analyzed polarization, ``beta`` the selected spatial mode.
    """
    return np.einsum("abij,ji->ab", _E_PAIRS, np.asarray(rho)).real


def intensities_to_two_dof_stokes(i):
    """Two-DoF Stokes matrix from the intensity matrix, ``S = F I F^T``."""
    return F @ np.asarray(i, dtype=float) @ F.T


def two_dof_stokes_expanded(i):
    """The same conversion written out term by term.

    Kept as an independent check on :func:`intensities_to_two_dof_stokes`.
    """
    I = np.asarray(i, dtype=float)

    def g(a, b):
        return I[a, b]

    s = np.empty((4, 4))
    s[0, 0] = g(0, 0) + g(0, 1) + g(1, 0) + g(1, 1)
    s[0, 1] = -g(0, 0) - g(0, 1) + 2 * g(0, 2) - g(1, 0) - g(1, 1) + 2 * g(1, 2)
    s[0, 2] = -g(0, 0) - g(0, 1) + 2 * g(0, 3) - g(1, 0) - g(1, 1) + 2 * g(1, 3)
    s[0, 3] = g(0, 0) - g(0, 1) + g(1, 0) - g(1, 1)
    s[1, 0] = -g(0, 0) - g(0, 1) - g(1, 0) - g(1, 1) + 2 * (g(2, 0) + g(2, 1))
    s[1, 1] = (g(0, 0) + g(0, 1) - 2 * g(0, 2) + g(1, 0) + g(1, 1)
               - 2 * (g(1, 2) + g(2, 0) + g(2, 1) - 2 * g(2, 2)))
    s[1, 2] = (g(0, 0) + g(0, 1) - 2 * g(0, 3) + g(1, 0) + g(1, 1)
               - 2 * (g(1, 3) + g(2, 0) + g(2, 1) - 2 * g(2, 3)))
    s[1, 3] = -g(0, 0) + g(0, 1) - g(1, 0) + g(1, 1) + 2 * g(2, 0) - 2 * g(2, 1)
    s[2, 0] = -g(0, 0) - g(0, 1) - g(1, 0) - g(1, 1) + 2 * (g(3, 0) + g(3, 1))
    s[2, 1] = (g(0, 0) + g(0, 1) - 2 * g(0, 2) + g(1, 0) + g(1, 1)
               - 2 * (g(1, 2) + g(3, 0) + g(3, 1) - 2 * g(3, 2)))
    s[2, 2] = (g(0, 0) + g(0, 1) - 2 * g(0, 3) + g(1, 0) + g(1, 1)
               - 2 * (g(1, 3) + g(3, 0) + g(3, 1) - 2 * g(3, 3)))
    s[2, 3] = -g(0, 0) + g(0, 1) - g(1, 0) + g(1, 1) + 2 * g(3, 0) - 2 * g(3, 1)
    s[3, 0] = g(0, 0) + g(0, 1) - g(1, 0) - g(1, 1)
    s[3, 1] = -g(0, 0) - g(0, 1) + 2 * g(0, 2) + g(1, 0) + g(1, 1) - 2 * g(1, 2)
    s[3, 2] = -g(0, 0) - g(0, 1) + 2 * g(0, 3) + g(1, 0) + g(1, 1) - 2 * g(1, 3)
    s[3, 3] = g(0, 0) - g(0, 1) - g(1, 0) + g(1, 1)
    return s


def two_dof_reconstruct(s):
    """Mueller matrix from the two-DoF Stokes matrix of a transmitted radial probe.

    ``M[mu, nu] = S'[mu, nu] * lambda_nu``: only the circular column flips sign.
    The probe is assumed to carry unit power.
    """
    return np.asarray(s, dtype=float) * LAMBDA[None, :]


def single_shot_mueller(t):
    """Noiseless single-shot route on a known sample, via ideal projector intensities."""
    e = apply_to_pol(t, radial_beam())
    i = abstract_intensities(coherency_of(e))
    return two_dof_reconstruct(intensities_to_two_dof_stokes(i))


def least_squares_mueller(pairs):
    """Ordinary least-squares Mueller matrix from (input, output) Stokes pairs.

    Minimizes ``sum ||S'_k - M S_k||^2`` via the normal equations
    ``M = V' V^T (V V^T)^-1``.

    Raises
    ------
    RankDeficient
        If the input Stokes vectors do not span R^4.
    """
    pairs = list(pairs)
    if len(pairs) < 4:
        raise RankDeficient(f"need at least 4 probe pairs, got {len(pairs)}")
    v = np.column_stack([np.asarray(p[0], dtype=float) for p in pairs])
    vp = np.column_stack([np.asarray(p[1], dtype=float) for p in pairs])
    gram = v @ v.T
    # scale-free singularity test: normalize the Gram matrix to unit diagonal
    d = np.sqrt(np.diag(gram))
    if np.any(d == 0):
        raise RankDeficient("a Stokes component is identically zero across probes")
    try:
        invert4(gram / np.outer(d, d))
        ginv = invert4(gram, tol=0.0)
    except SingularMatrix as exc:
        raise RankDeficient(str(exc)) from exc
    return vp @ v.T @ ginv


def two_dof_stokes_of_output(t):
    """Exact S' of a unit-power radial probe after the sample, for tests and diagnostics."""
    return two_dof_stokes(coherency_of(apply_to_pol(t, radial_beam())))
