"""Walk a radial probe through the simulated bench.

Sample, three-way split, mode converters, mode beam splitters and the
conventional polarization measurements, down to the 16 labelled detectors
and the 10 auxiliary ones.
"""

import numpy as np

from radialpol.bench import PortField, calibrate, full_bench, mode_beam_splitter, postselected_amplitudes
from radialpol.elements import half_wave
from radialpol.polarimetry import intensities_to_two_dof_stokes, mueller_from_jones, two_dof_reconstruct
from radialpol.states import radial_beam

np.set_printoptions(precision=4, suppress=True)

# the mode beam splitter alone sorts psi10 and psi01 into separate ports
p1, p2 = mode_beam_splitter(PortField(radial_beam()))
print("MBS port 1:", p1.amplitudes, " port 2:", p2.amplitudes)

t = half_wave(np.pi / 8)
d = full_bench(t)
print("raw labelled readings [alpha, beta] (each carries a 1/9 split factor):\n", d.matrix())
print("auxiliary detectors:", {k: round(v, 4) for k, v in sorted(d.auxiliary.items())})
print("total detected power:", round(d.total_power(), 12))

for beta, a in postselected_amplitudes(t).items():
    print(f"beta={beta}: polarization leaving the selected port", a)

i = calibrate(d)
m = two_dof_reconstruct(intensities_to_two_dof_stokes(i))
print("bench Mueller estimate:\n", m)
print("max deviation from oracle:", np.abs(m - mueller_from_jones(t)).max())
