"""How readout noise propagates into the Mueller estimate.

Relative Gaussian noise on every detector; the median Frobenius error
should fall by ten for every tenfold drop in noise.
"""

from radialpol.experiment import parse_config, sweep

cfg = parse_config("""
sample: [{type: qwp, theta_deg: 30}, {type: polarizer, theta: 0.2}]
scheme: all
trials: 200
seed: 11
""")
rows = sweep(cfg, [1e-2, 1e-3, 1e-4])
print(f"{'sigma_rel':>10} {'scheme':>14} {'median':>10} {'p05':>10} {'p95':>10}")
for r in rows:
    print(f"{r['sigma_rel']:>10.0e} {r['scheme']:>14} {r['frob_median']:>10.2e} {r['frob_p05']:>10.2e} {r['frob_p95']:>10.2e}")
