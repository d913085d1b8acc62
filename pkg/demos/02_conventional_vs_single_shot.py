"""Sequential four-probe polarimetry against the single-shot two-DoF route.

Both recover the Mueller matrix of an arbitrary passive Jones sample.
The conventional route needs four probe states; the single-shot route
reads one radially polarized probe through 16 projector intensities.
"""

import numpy as np

from radialpol.elements import apply_to_pol, random_passive
from radialpol.polarimetry import (
    abstract_intensities,
    conventional_probe_set,
    conventional_reconstruct,
    intensities_to_two_dof_stokes,
    mueller_from_jones,
    two_dof_reconstruct,
)
from radialpol.rng import make_rng
from radialpol.states import coherency_of, radial_beam

np.set_printoptions(precision=4, suppress=True)

t = random_passive(make_rng(7))
print("sample Jones matrix:\n", t)
m = mueller_from_jones(t)
print("oracle Mueller matrix:\n", m)

probes = conventional_probe_set()
print("probe Stokes columns V:\n", probes.v)
m_conv = conventional_reconstruct(t, probes)

i = abstract_intensities(coherency_of(apply_to_pol(t, radial_beam())))
print("16 intensities I[alpha, beta]:\n", i)
m_ss = two_dof_reconstruct(intensities_to_two_dof_stokes(i))

print("max |M_conventional - M|:", np.abs(m_conv - m).max())
print("max |M_single_shot  - M|:", np.abs(m_ss - m).max())
