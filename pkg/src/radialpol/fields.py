"""Transverse field maps of first-order beams at the waist plane.

Modes are the L2-normalized Hermite-Gauss functions at z = 0 (no Gouy
phase, no wavefront curvature)::

    psi_mn(x, y) = sqrt(2/pi) / w0 / sqrt(2**(m+n) m! n!)
                   * H_m(sqrt2 x / w0) H_n(sqrt2 y / w0) exp(-(x^2 + y^2) / w0^2)

so ``psi10 = (2x / w0) psi00``.
"""

import csv
from dataclasses import dataclass
from math import factorial
from pathlib import Path

import numpy as np
from numpy.polynomial import hermite

from .states import stokes_of


@dataclass(frozen=True)
class Grid:
    """Square-pixel sampling of the transverse plane.

    ``extent`` is the half-width in units of the waist ``w0``; pixel centres
    run from ``-extent*w0`` to ``+extent*w0`` inclusive.
    """

    nx: int = 512
    ny: int = 512
    extent: float = 3.0
    w0: float = 1.0

    def __post_init__(self):
        if self.nx < 2 or self.ny < 2:
            raise ValueError("grid needs at least 2 pixels per axis")
        if not self.extent > 0 or not self.w0 > 0:
            raise ValueError("extent and w0 must be positive")

    @property
    def x(self):
        return np.linspace(-self.extent * self.w0, self.extent * self.w0, self.nx)

    @property
    def y(self):
        return np.linspace(-self.extent * self.w0, self.extent * self.w0, self.ny)

    @property
    def pixel_area(self):
        return (self.x[1] - self.x[0]) * (self.y[1] - self.y[0])

    def mesh(self):
        """``(X, Y)`` arrays of shape (ny, nx)."""
        return np.meshgrid(self.x, self.y, indexing="xy")


def _hermite_1d(n, u):
    c = np.zeros(n + 1)
    c[n] = 1
    return hermite.hermval(u, c)


def hg_mode(m, n, grid):
    """Hermite-Gauss mode psi_mn sampled on ``grid``; returns a (ny, nx) complex array."""
    if m < 0 or n < 0:
        raise ValueError("mode indices must be nonnegative")
    X, Y = grid.mesh()
    w0 = grid.w0
    u, v = np.sqrt(2) * X / w0, np.sqrt(2) * Y / w0
    norm = np.sqrt(2 / np.pi) / w0 / np.sqrt(2.0 ** (m + n) * factorial(m) * factorial(n))
    psi = norm * _hermite_1d(m, u) * _hermite_1d(n, v) * np.exp(-(X**2 + Y**2) / w0**2)
    return psi.astype(complex)


def overlap(a, b, grid):
    """Numerical ``int conj(a) b dx dy``."""
    return complex(np.sum(np.conj(a) * b) * grid.pixel_area)


@dataclass
class FieldMap:
    """Per-pixel Jones vector ``(ex, ey)`` on a grid; arrays are (ny, nx)."""

    x: np.ndarray
    y: np.ndarray
    ex: np.ndarray
    ey: np.ndarray

    @property
    def intensity(self):
        return np.abs(self.ex) ** 2 + np.abs(self.ey) ** 2

    @property
    def phase_x(self):
        return np.angle(self.ex)

    @property
    def phase_y(self):
        return np.angle(self.ey)

    def local_stokes(self):
        """Local Stokes parameters (Pauli ordering, S3 = H/V), shape (4, ny, nx)."""
        exx = np.abs(self.ex) ** 2
        eyy = np.abs(self.ey) ** 2
        exy = self.ex * np.conj(self.ey)
        # tr(rho sigma_mu) with rho = [[exx, exy], [conj(exy), eyy]]
        return np.stack([exx + eyy, 2 * exy.real, -2 * exy.imag, exx - eyy])

    def polarization_coherency(self, pixel_area):
        """Bucket-detector 2x2 coherency matrix (spatially integrated)."""
        e = np.stack([self.ex, self.ey])
        return np.einsum("iyx,jyx->ij", e, np.conj(e)) * pixel_area

    def __sub__(self, other):
        return FieldMap(self.x, self.y, self.ex - other.ex, self.ey - other.ey)

    def max_abs(self):
        return float(max(np.abs(self.ex).max(), np.abs(self.ey).max()))


def first_order_modes(grid):
    """``(psi10, psi01)`` on ``grid``."""
    return hg_mode(1, 0, grid), hg_mode(0, 1, grid)


def render(e, grid, modes=None):
    """Field of a two-qubit beam: ``(A00 psi10 + A01 psi01) e_x + (A10 psi10 + A11 psi01) e_y``."""
    a00, a01, a10, a11 = np.asarray(e, dtype=complex).ravel()
    p10, p01 = modes if modes is not None else first_order_modes(grid)
    return FieldMap(grid.x, grid.y, a00 * p10 + a01 * p01, a10 * p10 + a11 * p01)


_R2 = 1 / np.sqrt(2)


def radial_decomposition(kind, grid, modes=None):
    """Radial beam assembled pixel by pixel from one of three mode/polarization pairings.

    ``"linear"``:   (e_x psi10 + e_y psi01) / sqrt2
    ``"diagonal"``: (e_+ psi_+ + e_- psi_-) / sqrt2
    ``"circular"``: (e_L psi_R + e_R psi_L) / sqrt2
    """
    p10, p01 = modes if modes is not None else first_order_modes(grid)
    if kind == "linear":
        terms = [((1, 0), p10), ((0, 1), p01)]
    elif kind == "diagonal":
        terms = [((_R2, _R2), _R2 * (p10 + p01)), ((_R2, -_R2), _R2 * (p10 - p01))]
    elif kind == "circular":
        psi_l = _R2 * (p10 + 1j * p01)
        psi_r = _R2 * (p10 - 1j * p01)
        terms = [((_R2, 1j * _R2), psi_r), ((_R2, -1j * _R2), psi_l)]
    else:
        raise ValueError(f"unknown decomposition {kind!r}")
    ex = sum(jv[0] * psi for jv, psi in terms) * _R2
    ey = sum(jv[1] * psi for jv, psi in terms) * _R2
    return FieldMap(grid.x, grid.y, ex, ey)


def global_stokes(fmap, grid):
    """Stokes vector a bucket detector would measure."""
    return stokes_of(fmap.polarization_coherency(grid.pixel_area))


# --- output ---------------------------------------------------------------

CSV_HEADER = ("x", "y", "ReEx", "ImEx", "ReEy", "ImEy")
PIXMAP_GAMMA = 1 / 2.2


def _layer_rgb(fmap, layer):
    if layer == "intensity":
        i = fmap.intensity
        peak = i.max()
        g = (i / peak) ** PIXMAP_GAMMA if peak > 0 else i
        return np.repeat(g[..., None], 3, axis=-1)
    if layer in ("phase_x", "phase_y"):
        from matplotlib.colors import hsv_to_rgb

        comp = fmap.ex if layer == "phase_x" else fmap.ey
        amp = np.abs(comp)
        peak = amp.max()
        hue = (np.angle(comp) + np.pi) / (2 * np.pi) % 1.0
        val = amp / peak if peak > 0 else amp
        hsv = np.stack([hue, np.ones_like(hue), val], axis=-1)
        return hsv_to_rgb(hsv)
    raise ValueError(f"unknown layer {layer!r}")


def emit_map(fmap, path, format="csv", layer="intensity"):
    """Write a field map as CSV or as a binary P6 pixmap.

    CSV: header ``x,y,ReEx,ImEx,ReEy,ImEy`` then one row per pixel in
    row-major order (y outer, x inner), 9 significant digits.

    Pixmap: 8 bits per channel, top row is the largest y. ``intensity`` is
    grey with gamma 1/2.2 after normalizing to the peak; ``phase_x`` /
    ``phase_y`` map the component's phase to hue (-pi red, through
    green and blue, back to red at +pi) and its amplitude to brightness.
    """
    path = Path(path)
    if format == "csv":
        with path.open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(CSV_HEADER)
            for j, yv in enumerate(fmap.y):
                for i, xv in enumerate(fmap.x):
                    ex, ey = fmap.ex[j, i], fmap.ey[j, i]
                    w.writerow([f"{v:.9g}" for v in (xv, yv, ex.real, ex.imag, ey.real, ey.imag)])
    elif format == "pixmap":
        rgb = _layer_rgb(fmap, layer)
        data = np.clip(np.round(np.flipud(rgb) * 255), 0, 255).astype(np.uint8)
        ny, nx = data.shape[:2]
        with path.open("wb") as fh:
            fh.write(f"P6\n{nx} {ny}\n255\n".encode("ascii"))
            fh.write(data.tobytes())
    else:
        raise ValueError(f"unknown map format {format!r}")
    return path


def read_csv(path):
    """Inverse of ``emit_map(..., format="csv")``."""
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    xs = np.unique(data[:, 0])
    ys = np.unique(data[:, 1])
    shape = (len(ys), len(xs))
    ex = (data[:, 2] + 1j * data[:, 3]).reshape(shape)
    ey = (data[:, 4] + 1j * data[:, 5]).reshape(shape)
    return FieldMap(xs, ys, ex, ey)


def read_pixmap_header(path):
    """Return ``(width, height, maxval)`` of a P6 file."""
    with open(path, "rb") as fh:
        magic = fh.readline().strip()
        if magic != b"P6":
            raise ValueError("not a P6 pixmap")
        w, h = (int(v) for v in fh.readline().split())
        maxval = int(fh.readline())
    return w, h, maxval
