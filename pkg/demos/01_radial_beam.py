"""A radially polarized beam looks unpolarized to a bucket detector.

Polarization and transverse mode are maximally correlated: tracing out the
mode leaves I/2, yet the joint two-DoF Stokes matrix is diag(1, 1, -1, 1).
"""

import numpy as np

from radialpol.fields import Grid, global_stokes, render
from radialpol.states import coherency_of, radial_beam, reduce_pol, schmidt_coefficients, stokes_of, two_dof_stokes

np.set_printoptions(precision=4, suppress=True)

e = radial_beam()
rho = coherency_of(e)
print("amplitudes [A00, A01, A10, A11]:", e)
print("Schmidt coefficients:", schmidt_coefficients(e))
print("reduced polarization Stokes vector:", stokes_of(reduce_pol(rho)))
print("two-DoF Stokes matrix:\n", two_dof_stokes(rho))

# the same statement on a sampled transverse field
grid = Grid(256, 256)
f = render(e, grid)
print("bucket-detector Stokes from the sampled field:", global_stokes(f, grid))
s = f.local_stokes()
j = grid.ny // 2
print("local Stokes on the +x axis (S0, S1, S2, S3):", s[:, j, 3 * grid.nx // 4])
