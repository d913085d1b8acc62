"""Jones matrices of single-qubit elements and the projector algebra.

The same 2x2 matrices describe wave plates acting on polarization and
cylindrical-lens mode converters acting on the first-order spatial modes.
:class:`Element` tags a matrix with the degree of freedom it acts on.
"""

from dataclasses import dataclass

import numpy as np

from .algebra import I2, SingularMatrix, dagger, invert4, pauli
from .states import BASIS_KETS

POL = "pol"
SPA = "spa"

KINDS = ("HalfWaveConverter", "QuarterWaveConverter", "Rotator", "Polarizer", "CustomJones")


def converter(phase):
    """Unrotated pi- or pi/2-converter with fast axis horizontal.

    ``converter(np.pi)`` is the half-wave plate ``exp(-i pi/2) diag(1, -1)``,
    ``converter(np.pi / 2)`` the quarter-wave plate ``exp(-i pi/4) diag(1, i)``.
    """
    if np.isclose(phase, np.pi, rtol=0, atol=1e-12):
        return np.exp(-1j * np.pi / 2) * np.array([[1, 0], [0, -1]], dtype=complex)
    if np.isclose(phase, np.pi / 2, rtol=0, atol=1e-12):
        return np.exp(-1j * np.pi / 4) * np.array([[1, 0], [0, 1j]], dtype=complex)
    raise ValueError(f"converter phase must be pi or pi/2, got {phase!r}")


def rotation(theta):
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]], dtype=complex)


def rotated(u, theta):
    """Element ``u`` rotated by ``theta`` about the beam axis: D(theta) u D(-theta)."""
    return rotation(theta) @ np.asarray(u) @ rotation(-theta)


U_PI = converter(np.pi)
U_HALF_PI = converter(np.pi / 2)


def half_wave(theta=0.0):
    return rotated(U_PI, theta)


def quarter_wave(theta=0.0):
    return rotated(U_HALF_PI, theta)


def projector(mu):
    """Projector ``E_mu = |mu><mu|`` onto the state ``mu`` of (|0>, |1>, |+>, |L>)."""
    if mu not in (0, 1, 2, 3):
        raise IndexError(f"projector index must be 0..3, got {mu!r}")
    k = BASIS_KETS[mu]
    return np.outer(k, k.conj())


def polarizer(theta=0.0):
    """Ideal linear polarizer transmitting the direction at angle ``theta``."""
    return rotated(projector(0), theta)


def coeff_G():
    """``G[mu, alpha] = tr(E_mu sigma_alpha) / 2`` so that ``E_mu = sum_a G[mu,a] sigma_a``."""
    return np.array(
        [[np.trace(projector(mu) @ pauli(a)).real / 2 for a in range(4)] for mu in range(4)]
    )


def coeff_F():
    """``F = G^-1``; expands Pauli matrices over the projectors."""
    try:
        return invert4(coeff_G())
    except SingularMatrix as exc:  # pragma: no cover - fixed, well-conditioned set
        raise AssertionError("projector set is degenerate") from exc


F = coeff_F()
F.setflags(write=False)


def projector_via_converter(mu):
    """Build E_2 or E_3 the way an apparatus does: a rotated converter then E_0."""
    if mu == 2:
        u = rotated(U_PI, np.pi / 8)
    elif mu == 3:
        u = rotated(U_HALF_PI, np.pi / 4)
    else:
        raise ValueError(f"only projectors 2 and 3 need a converter, got {mu!r}")
    return dagger(u) @ projector(0) @ u


def apply_to_pol(t, e):
    """Apply ``T (x) I`` to a two-qubit beam; equivalently ``A' = T A``."""
    if isinstance(t, Element):
        if t.dof != POL:
            raise TypeError(f"element acts on the {t.dof!r} DoF, not polarization")
        t = t.jones
    a = np.asarray(e, dtype=complex).reshape(2, 2)
    return (np.asarray(t) @ a).ravel()


def apply_to_spa(w, e):
    """Apply ``I (x) W`` to a two-qubit beam; ``A' = A W^T``."""
    if isinstance(w, Element):
        if w.dof != SPA:
            raise TypeError(f"element acts on the {w.dof!r} DoF, not the spatial mode")
        w = w.jones
    a = np.asarray(e, dtype=complex).reshape(2, 2)
    return (a @ np.asarray(w).T).ravel()


@dataclass(frozen=True)
class Element:
    """A Jones matrix bound to the degree of freedom it acts on.

    ``kind`` is one of :data:`KINDS`; ``theta`` is the rotation angle in
    radians where it applies.
    """

    kind: str
    theta: float = 0.0
    custom: np.ndarray = None
    dof: str = POL

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown element kind {self.kind!r}")
        if not np.isfinite(self.theta):
            raise ValueError("theta must be finite")
        if self.dof not in (POL, SPA):
            raise ValueError(f"dof must be {POL!r} or {SPA!r}")
        if self.kind == "CustomJones":
            m = np.asarray(self.custom, dtype=complex)
            if m.shape != (2, 2) or not np.all(np.isfinite(m)):
                raise ValueError("CustomJones needs a finite 2x2 matrix")
            object.__setattr__(self, "custom", m)

    @property
    def jones(self):
        if self.kind == "HalfWaveConverter":
            return half_wave(self.theta)
        if self.kind == "QuarterWaveConverter":
            return quarter_wave(self.theta)
        if self.kind == "Rotator":
            return rotation(self.theta)
        if self.kind == "Polarizer":
            return polarizer(self.theta)
        return self.custom.copy()


def compose(elements):
    """Jones matrix of elements listed in the order light meets them.

    ``compose([a, b])`` is ``b.jones @ a.jones``: light crosses ``a`` first.
    """
    t = I2.copy()
    for el in elements:
        j = el.jones if isinstance(el, Element) else np.asarray(el, dtype=complex)
        t = j @ t
    return t


@dataclass
class DepolarizingEnsemble:
    """Weighted stochastic set of Jones matrices modelling a depolarizing sample."""

    weights: np.ndarray
    jones: np.ndarray  # shape (K, 2, 2)

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=float).ravel()
        self.jones = np.asarray(self.jones, dtype=complex).reshape(-1, 2, 2)
        if len(self.weights) == 0:
            raise ValueError("ensemble must have at least one member")
        if len(self.weights) != len(self.jones):
            raise ValueError("weights and Jones matrices differ in length")
        if np.any(self.weights < 0):
            raise ValueError("ensemble weights must be nonnegative")
        if abs(self.weights.sum() - 1.0) > 1e-12:
            raise ValueError(f"ensemble weights sum to {self.weights.sum()!r}, not 1")
        if not np.all(np.isfinite(self.jones)):
            raise ValueError("ensemble Jones matrices must be finite")

    def __len__(self):
        return len(self.weights)

    def __iter__(self):
        return zip(self.weights, self.jones)

    @classmethod
    def uniform(cls, jones):
        jones = np.asarray(jones, dtype=complex).reshape(-1, 2, 2)
        return cls(np.full(len(jones), 1.0 / len(jones)), jones)

    @classmethod
    def haar(cls, n, rng):
        return cls.uniform(random_unitary(rng, size=n))


def random_unitary(rng, size=None):
    """Haar-distributed 2x2 unitaries via QR of complex Ginibre matrices."""
    shape = (1,) if size is None else (size,)
    z = (rng.standard_normal(shape + (2, 2)) + 1j * rng.standard_normal(shape + (2, 2))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r, axis1=-2, axis2=-1)
    q = q * (d / np.abs(d))[..., None, :]
    return q[0] if size is None else q


def random_passive(rng, size=None):
    """Random general Jones matrices with largest singular value in [0.5, 1].

    Complex Gaussian entries, rescaled so that the element never amplifies.
    """
    shape = (1,) if size is None else (size,)
    z = rng.standard_normal(shape + (2, 2)) + 1j * rng.standard_normal(shape + (2, 2))
    smax = np.linalg.norm(z, ord=2, axis=(-2, -1))
    scale = rng.uniform(0.5, 1.0, size=shape)
    t = z * (scale / smax)[..., None, None]
    return t[0] if size is None else t
