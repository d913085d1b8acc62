"""Single-shot Mueller matrix polarimetry with radially polarized beams.

A radially polarized beam entangles polarization with the first-order
Hermite-Gauss modes. After a sample, projecting on four spatial modes and
analyzing four polarizations gives 16 intensities from which the full Mueller
matrix follows in one shot. This package simulates that measurement, the
conventional four-probe alternative, and the optical bench between them.
"""

__version__ = "0.1.0"

from .algebra import SingularMatrix, invert4, kron, pauli
from .states import (
    LAMBDA,
    coherency_of,
    radial_beam,
    reduce_pol,
    reduce_spa,
    schmidt_coefficients,
    stokes_of,
    two_dof_stokes,
)
from .elements import (
    DepolarizingEnsemble,
    Element,
    apply_to_pol,
    coeff_F,
    coeff_G,
    compose,
    converter,
    projector,
    rotated,
)
from .polarimetry import (
    RankDeficient,
    conventional_probe_set,
    conventional_reconstruct,
    intensities_to_two_dof_stokes,
    least_squares_mueller,
    mueller_depolarizing,
    mueller_from_jones,
    two_dof_reconstruct,
)
from .bench import DetectorMap, NoiseSpec, calibrate, full_bench, noisy_readout
