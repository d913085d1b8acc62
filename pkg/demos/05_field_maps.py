"""Write transverse maps of the probe and of a transmitted beam.

The radial beam has the same field whether written in the linear,
diagonal or circular mode/polarization pairing.
"""

import sys
from pathlib import Path

import numpy as np

from radialpol.elements import apply_to_pol, quarter_wave
from radialpol.fields import Grid, emit_map, first_order_modes, radial_decomposition, render
from radialpol.states import radial_beam

out = Path(sys.argv[1] if len(sys.argv) > 1 else "field_maps")
out.mkdir(exist_ok=True)

grid = Grid(256, 256)
modes = first_order_modes(grid)
lin = radial_decomposition("linear", grid, modes)
for kind in ("diagonal", "circular"):
    print(f"linear vs {kind}: max pixel difference", (lin - radial_decomposition(kind, grid, modes)).max_abs())

emit_map(lin, out / "radial_intensity.ppm", "pixmap", "intensity")
emit_map(lin, out / "radial_phase_x.ppm", "pixmap", "phase_x")
t = quarter_wave(np.pi / 4)
emit_map(render(apply_to_pol(t, radial_beam()), grid, modes), out / "after_qwp_phase_y.ppm", "pixmap", "phase_y")
print("wrote", sorted(p.name for p in out.iterdir()))
