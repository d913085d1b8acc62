"""Exit checks for the package, one function per criterion.

Each check returns a :class:`Check`; ``tests/test_acceptance.py`` asserts
them and ``radialpol selftest`` prints them.
"""

import time
from dataclasses import dataclass

import numpy as np

from .bench import (
    NoiseSpec,
    PortField,
    calibrate,
    full_bench,
    mbs_net,
    mode_beam_splitter,
    noisy_readout,
)
from .elements import (
    U_HALF_PI,
    U_PI,
    DepolarizingEnsemble,
    half_wave,
    projector,
    random_passive,
    random_unitary,
    rotated,
)
from .polarimetry import (
    abstract_intensities,
    conventional_probe_set,
    conventional_reconstruct,
    intensities_to_two_dof_stokes,
    mueller_depolarizing,
    mueller_from_jones,
    two_dof_reconstruct,
    two_dof_stokes_expanded,
)
from .algebra import pauli
from .fields import Grid, first_order_modes, overlap, radial_decomposition
from .rng import make_rng
from .states import (
    KET_0,
    KET_1,
    KET_L,
    KET_MINUS,
    KET_PLUS,
    KET_R,
    LAMBDA,
    coherency_of,
    phase_distance,
    product_beam,
    radial_beam,
    reduce_pol,
    reduce_spa,
    stokes_of,
    two_dof_stokes,
)

SEED = 314159


@dataclass
class Check:
    number: int
    name: str
    passed: bool
    detail: str

    def line(self):
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number:2d}. {self.name}: {self.detail}"


def _samples(n, stream):
    return random_passive(make_rng(SEED, stream), size=n)


def oracle_triangle(n=10_000):
    ts = _samples(n, 1)
    t0 = time.perf_counter()
    worst = 0.0
    for t in ts:
        m_hat = two_dof_reconstruct(intensities_to_two_dof_stokes(calibrate(full_bench(t))))
        worst = max(worst, float(np.abs(m_hat - mueller_from_jones(t)).max()))
    wall = time.perf_counter() - t0
    ok = worst < 1e-9 and wall < 60
    return Check(1, "bench single-shot vs Jones oracle", ok,
                 f"{n} samples, max|dM| = {worst:.2e} (tol 1e-9), wall {wall:.1f}s (limit 60s)")


def conventional_equivalence(n=10_000):
    ts = _samples(n, 1)
    probes = conventional_probe_set()
    worst = max(float(np.abs(conventional_reconstruct(t, probes) - mueller_from_jones(t)).max()) for t in ts)
    return Check(2, "conventional V'V^-1 vs oracle", worst < 1e-10,
                 f"{n} samples, max|dM| = {worst:.2e} (tol 1e-10)")


def radial_invariants():
    rho = coherency_of(radial_beam())
    half = np.eye(2) / 2
    e_pol = float(np.abs(reduce_pol(rho) - half).max())
    e_spa = float(np.abs(reduce_spa(rho) - half).max())
    s = stokes_of(reduce_pol(rho))
    e_s = float(np.abs(s - [1, 0, 0, 0]).max())
    s2 = two_dof_stokes(rho)
    e_s2 = float(np.abs(s2 - np.diag(LAMBDA)).max())
    ok = max(e_pol, e_spa) < 1e-12 and e_s < 1e-12 and e_s2 < 1e-12
    return Check(3, "radial beam invariants", ok,
                 f"|rho_pol-I/2|={e_pol:.1e}, |rho_spa-I/2|={e_spa:.1e}, "
                 f"|S-(1,0,0,0)|={e_s:.1e}, |S2-diag(1,1,-1,1)|={e_s2:.1e} (tol 1e-12)")


def _random_rho(rng):
    z = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    rho = z @ z.conj().T
    return rho / np.trace(rho).real


def expanded_formulas(n=1_000):
    rng = make_rng(SEED, 2)
    worst_f = worst_t = 0.0
    for _ in range(n):
        rho = _random_rho(rng)
        i = abstract_intensities(rho)
        s_exp = two_dof_stokes_expanded(i)
        worst_f = max(worst_f, float(np.abs(s_exp - intensities_to_two_dof_stokes(i)).max()))
        worst_t = max(worst_t, float(np.abs(s_exp - two_dof_stokes(rho)).max()))
    ok = worst_f < 1e-12 and worst_t < 1e-12
    return Check(4, "expanded intensity formulas", ok,
                 f"{n} states, vs FIF^T {worst_f:.1e}, vs trace {worst_t:.1e} (tol 1e-12)")


def mbs_routing():
    r2 = 1 / np.sqrt(2)
    cases = [
        ("e_x psi10", product_beam(KET_0, KET_0), 0),
        ("e_y psi10", product_beam(KET_1, KET_0), 0),
        ("e_x psi01", product_beam(KET_0, KET_1), 1),
        ("e_y psi01", product_beam(KET_1, KET_1), 1),
        ("radial", radial_beam(), None),
    ]
    dark = agree = 0.0
    for _, e, lit in cases:
        p1, p2 = mode_beam_splitter(PortField(e))
        n1, n2 = mbs_net(PortField(e))
        # wrong-mode content must vanish in each port
        dark = max(dark, abs(p1.amplitudes[1]), abs(p1.amplitudes[3]),
                   abs(p2.amplitudes[0]), abs(p2.amplitudes[2]))
        if lit == 0:
            dark = max(dark, float(np.abs(p2.amplitudes).max()))
        elif lit == 1:
            dark = max(dark, float(np.abs(p1.amplitudes).max()))
        agree = max(agree, phase_distance(p1.amplitudes, n1.amplitudes),
                    phase_distance(p2.amplitudes, n2.amplitudes))
    p1, p2 = mode_beam_splitter(PortField(radial_beam()))
    split = max(phase_distance(p1.amplitudes, r2 * product_beam(KET_0, KET_0)),
                phase_distance(p2.amplitudes, r2 * product_beam(KET_1, KET_1)))
    ok = dark < 1e-12 and agree < 1e-12 and split < 1e-12
    return Check(5, "mode beam splitter routing", ok,
                 f"dark-port amplitude {dark:.1e}, composition vs net {agree:.1e}, radial split {split:.1e} (tol 1e-12)")


def converter_phases():
    ub = rotated(U_PI, np.pi / 8)
    ua = rotated(U_HALF_PI, np.pi / 4)
    errs = [
        np.abs(ub @ KET_PLUS - (-1j) * KET_0).max(),
        np.abs(ub @ KET_MINUS - (-1j) * KET_1).max(),
        np.abs(ua @ KET_L - KET_0).max(),
        np.abs(ua @ KET_R - (-1j) * KET_1).max(),
    ]
    worst = float(max(errs))
    return Check(6, "converter identities with phases", worst < 1e-14,
                 f"max deviation {worst:.1e} over 4 identities (tol 1e-14)")


def postselection_values():
    i = calibrate(full_bench(half_wave(np.pi / 8)))
    e00, e20 = abs(i[0, 0] - 0.25), abs(i[2, 0] - 0.5)
    ok = e00 < 1e-12 and e20 < 1e-12
    return Check(7, "postselected intensities for HWP@22.5deg", ok,
                 f"I00={i[0, 0]:.15f} (0.25), I20={i[2, 0]:.15f} (0.5), tol 1e-12")


def depolarizing_average(n=100_000):
    ens = DepolarizingEnsemble.uniform(random_unitary(make_rng(SEED, 3), size=n))
    haar = float(np.abs(mueller_depolarizing(ens) - np.diag([1.0, 0, 0, 0])).max())
    two = DepolarizingEnsemble([0.5, 0.5], [np.eye(2), pauli(3)])
    exact = float(np.abs(mueller_depolarizing(two) - np.diag([1.0, 0, 0, 1])).max())
    ok = haar < 0.02 and exact < 1e-12
    return Check(8, "depolarizing ensembles", ok,
                 f"Haar n={n}: max dev {haar:.4f} (tol 0.02); {{I, sigma3}}: {exact:.1e} (tol 1e-12)")


NOISE_SIGMAS = (1e-2, 1e-3, 1e-4)


def noise_medians(sigmas=NOISE_SIGMAS, trials=200, seed=SEED):
    """Median Frobenius error of the bench estimate for each noise level."""
    t = random_passive(make_rng(seed, 4))
    m_true = mueller_from_jones(t)
    clean = full_bench(t)
    out = []
    for k, s in enumerate(sigmas):
        errs = []
        for j in range(trials):
            d = noisy_readout(clean, NoiseSpec(sigma_rel=s), make_rng(seed, 100 + k * trials + j))
            m = two_dof_reconstruct(intensities_to_two_dof_stokes(calibrate(d)))
            errs.append(np.linalg.norm(m - m_true))
        out.append(float(np.median(errs)))
    return out


def noise_scaling(trials=200):
    med = noise_medians(trials=trials)
    again = noise_medians(trials=trials)
    ratios = [med[k] / med[k + 1] for k in range(len(med) - 1)]
    steps = [NOISE_SIGMAS[k] / NOISE_SIGMAS[k + 1] for k in range(len(med) - 1)]
    linear = all(st / 3 <= r <= st * 3 for r, st in zip(ratios, steps))
    ok = linear and med == again
    return Check(9, "noise scaling", ok,
                 "medians " + ", ".join(f"{m:.2e}" for m in med)
                 + "; ratios " + ", ".join(f"{r:.2f}" for r in ratios)
                 + f" (expect 10 within x3); deterministic={med == again}")


def decompositions(n=512):
    grid = Grid(n, n, 3.0, 1.0)
    modes = first_order_modes(grid)
    lin = radial_decomposition("linear", grid, modes)
    dia = radial_decomposition("diagonal", grid, modes)
    cir = radial_decomposition("circular", grid, modes)
    diff = max((lin - dia).max_abs(), (lin - cir).max_abs(), (dia - cir).max_abs())
    p10, p01 = modes
    g = np.array([[overlap(a, b, grid) for b in modes] for a in modes])
    ortho = float(np.abs(g - np.eye(2)).max())
    ok = diff < 1e-12 and ortho < 1e-6
    return Check(10, "equivalent radial decompositions", ok,
                 f"{n}x{n} grid, pixel diff {diff:.1e} (tol 1e-12), HG Gram deviation {ortho:.1e} (tol 1e-6)")


ALL_CHECKS = (
    oracle_triangle,
    conventional_equivalence,
    radial_invariants,
    expanded_formulas,
    mbs_routing,
    converter_phases,
    postselection_values,
    depolarizing_average,
    noise_scaling,
    decompositions,
)


def run_all(echo=print):
    results = []
    for fn in ALL_CHECKS:
        c = fn()
        results.append(c)
        if echo:
            echo(c.line())
    return results
