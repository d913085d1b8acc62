"""Simulation of the single-shot polarimeter bench.

Layout (light travels left to right)::

    radial probe -> sample T -> 3-way split (1:2 then 1:1)
        branch A: MC A (pi/2-converter @ 45 deg)   -> MBS -> port 1 -> CPM   (psi_L,  beta=3)
                                                          -> port 2 -> aux
        branch B: MC B (pi-converter @ 22.5 deg)   -> MBS -> port 1 -> CPM   (psi_+,  beta=2)
                                                          -> port 2 -> aux
        branch C: MC C (empty)                     -> MBS -> port 1 -> CPM   (psi10,  beta=0)
                                                          -> port 2 -> CPM   (psi01,  beta=1)

Each CPM splits its beam three ways again and sends the branches through a
QWP @ 45 deg, a HWP @ 22.5 deg or nothing, each followed by a PBS. Four of the
six PBS outputs are the labelled detectors ``alpha beta``; the other two are
auxiliary. Together with the two unused MBS ports that makes 10 auxiliary
detectors.

Fields travel as :class:`PortField`: a two-qubit amplitude vector plus the
power fraction accumulated in the (phase-insensitive) polarization
maintaining splitters. Amplitude-level interference only happens inside the
mode beam splitter.
"""

from dataclasses import dataclass, field, replace

import numpy as np

from .algebra import kron, pauli
from .elements import (
    U_HALF_PI,
    U_PI,
    DepolarizingEnsemble,
    apply_to_pol,
    apply_to_spa,
    projector,
    rotated,
)
from .states import radial_beam

_S3 = pauli(3)
_I2 = pauli(0)

# i * [-E_x(x̄), E_y(x̄)]: psi10 is odd under x -> -x, psi01 even
MIRROR_OP = 1j * kron(_S3, _S3)
HWP_OP = kron(U_PI, _I2)

MC_OPS = {
    "A": rotated(U_HALF_PI, np.pi / 4),
    "B": rotated(U_PI, np.pi / 8),
    "C": _I2.copy(),
}
# polarization converters in front of each CPM's PBS, keyed by analyzer label
# (alpha of the x port, alpha of the y port or None for aux)
PC_OPS = {
    "A": rotated(U_HALF_PI, np.pi / 4),  # x port sees e_L, y port e_R
    "B": rotated(U_PI, np.pi / 8),  # x port sees e_+, y port e_-
    "C": _I2.copy(),  # x port e_x, y port e_y
}
PC_LABELS = {"A": (3, "R"), "B": (2, "-"), "C": (0, 1)}

# which MBS output of which mode-converter branch feeds spatial label beta
SELECTED_PORTS = {0: ("C", 1), 1: ("C", 2), 2: ("B", 1), 3: ("A", 1)}

_PBS_X = kron(projector(0), _I2)
_PBS_Y = kron(projector(1), _I2)


class InconsistentScale(ValueError):
    """A detector reading cannot be calibrated because its power scale is zero."""


@dataclass
class PortField:
    """Field in one port: amplitudes and the accumulated power-split factor.

    Physical power is ``power_scale * ||amplitudes||^2``.
    """

    amplitudes: np.ndarray
    power_scale: float = 1.0
    port_label: str = ""

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex).ravel()
        if self.amplitudes.shape != (4,):
            raise ValueError("a port field holds four mode amplitudes")
        if self.power_scale < 0:
            raise ValueError("power_scale must be nonnegative")

    @property
    def power(self):
        return self.power_scale * float(np.vdot(self.amplitudes, self.amplitudes).real)

    def with_amplitudes(self, a, label=None):
        return replace(self, amplitudes=a, port_label=self.port_label if label is None else label)

    @classmethod
    def vacuum(cls, power_scale=1.0, label="vacuum"):
        return cls(np.zeros(4, dtype=complex), power_scale, label)


def _join(*parts):
    return "/".join(p for p in parts if p)


def mirror(f):
    """Plane mirror: flips x and the handedness of the spatial modes."""
    return f.with_amplitudes(MIRROR_OP @ f.amplitudes, _join(f.port_label, "M"))


def inline_hwp(f):
    """Half-wave plate with horizontal fast axis: ``[E_x, E_y] -> i[-E_x, E_y]``."""
    return f.with_amplitudes(HWP_OP @ f.amplitudes, _join(f.port_label, "HWP"))


def beamsplitter50(f1, f2):
    """Symmetric lossless 50/50 beam splitter.

    The reflected part of each input picks up the mirror transform, so
    ``out1 = (E1 + R E2) / sqrt2`` and ``out2 = (E2 + R E1) / sqrt2``.
    Both inputs must carry the same power scale unless one is dark.
    """
    s1, s2 = f1.power_scale, f2.power_scale
    if not np.any(f1.amplitudes):
        s1 = s2
    elif not np.any(f2.amplitudes):
        s2 = s1
    if not np.isclose(s1, s2, rtol=1e-12, atol=0):
        raise ValueError("beam splitter inputs have different power scales")
    a1, a2 = f1.amplitudes, f2.amplitudes
    h = 1 / np.sqrt(2)
    o1 = h * (a1 + MIRROR_OP @ a2)
    o2 = h * (a2 + MIRROR_OP @ a1)
    return (
        PortField(o1, s1, _join(f1.port_label, "BS1")),
        PortField(o2, s1, _join(f1.port_label, "BS2")),
    )


def mode_beam_splitter(f):
    """Mode beam splitter built from its elements.

    A Mach-Zehnder interferometer: arm 1 (transmitted) holds a HWP and one
    mirror, arm 2 (reflected) two mirrors. Output port 2 carries a second
    HWP. Port 1 receives only psi10 content, port 2 only psi01 content.
    Compared with :func:`mbs_net` the ports differ by global phases of -1
    and +1 respectively.
    """
    base = f.port_label
    a, b = beamsplitter50(f.with_amplitudes(f.amplitudes, ""), PortField.vacuum(f.power_scale, ""))
    a = mirror(inline_hwp(a))
    b = mirror(mirror(b))
    p1, p2 = beamsplitter50(a, b)
    p2 = inline_hwp(p2)
    return (
        PortField(p1.amplitudes, p1.power_scale, _join(base, "MBS:1")),
        PortField(p2.amplitudes, p2.power_scale, _join(base, "MBS:2")),
    )


def mbs_net(f):
    """Net input-output relation of the mode beam splitter.

    ``port1 = -(A00 e_x + A10 e_y) psi10`` and ``port2 = (A01 e_x + A11 e_y) psi01``.
    """
    a00, a01, a10, a11 = f.amplitudes
    p1 = np.array([-a00, 0, -a10, 0], dtype=complex)
    p2 = np.array([0, a01, 0, a11], dtype=complex)
    return (
        PortField(p1, f.power_scale, _join(f.port_label, "MBS:1")),
        PortField(p2, f.power_scale, _join(f.port_label, "MBS:2")),
    )


def mode_converter(which, f):
    """Apply mode converter A, B or C to the spatial qubit."""
    try:
        u = MC_OPS[which]
    except KeyError:
        raise ValueError(f"mode converter must be 'A', 'B' or 'C', got {which!r}") from None
    return f.with_amplitudes(apply_to_spa(u, f.amplitudes), _join(f.port_label, f"MC{which}"))


def three_way_split(f):
    """Polarization-maintaining 1:2 then 1:1 split into three equal beams."""
    return [
        PortField(f.amplitudes.copy(), f.power_scale / 3, _join(f.port_label, tag))
        for tag in ("split3:1", "split3:2", "split3:3")
    ]


def cpm(f):
    """Conventional polarization measurement on one beam.

    Returns ``(labelled, auxiliary)``. ``labelled`` maps the analyzer index
    alpha (0: e_x, 1: e_y, 2: e_+, 3: e_L) to ``(power, power_scale)``;
    ``auxiliary`` maps ``"R"`` and ``"-"`` to the remaining two PBS outputs.
    """
    labelled, aux = {}, {}
    for branch, g in zip("ABC", three_way_split(f)):
        u = PC_OPS[branch]
        a = apply_to_pol(u, g.amplitudes)
        px = float(np.vdot(a, _PBS_X @ a).real) * g.power_scale
        py = float(np.vdot(a, _PBS_Y @ a).real) * g.power_scale
        lx, ly = PC_LABELS[branch]
        labelled[lx] = (px, g.power_scale)
        if isinstance(ly, int):
            labelled[ly] = (py, g.power_scale)
        else:
            aux[ly] = (py, g.power_scale)
    return labelled, aux


@dataclass
class DetectorMap:
    """Detector powers of the bench.

    ``readings[(alpha, beta)]`` are the 16 labelled detectors, ``auxiliary``
    holds the rest by name. ``scales`` records, for every detector, the power
    fraction the ideal splitters deliver to it.
    """

    readings: dict = field(default_factory=dict)
    auxiliary: dict = field(default_factory=dict)
    scales: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.readings) not in (0, 16):
            raise ValueError("a detector map holds exactly 16 labelled readings")
        if any(v < 0 for v in self.readings.values()) or any(v < 0 for v in self.auxiliary.values()):
            raise ValueError("detector readings must be nonnegative")

    def total_power(self):
        return sum(self.readings.values()) + sum(self.auxiliary.values())

    def matrix(self):
        """Raw labelled readings as a 4x4 array indexed ``[alpha, beta]``."""
        m = np.zeros((4, 4))
        for (a, b), v in self.readings.items():
            m[a, b] = v
        return m

    def scaled(self, weight):
        return DetectorMap(
            {k: weight * v for k, v in self.readings.items()},
            {k: weight * v for k, v in self.auxiliary.items()},
            dict(self.scales),
        )

    def to_dict(self):
        return {
            "primary": {f"{a}{b}": self.readings[(a, b)] for (a, b) in sorted(self.readings)},
            "auxiliary": {k: self.auxiliary[k] for k in sorted(self.auxiliary)},
        }


def _bench_pure(t):
    e = apply_to_pol(t, radial_beam())
    branches = dict(zip("ABC", three_way_split(PortField(e, 1.0, "sample"))))
    ports = {}
    for name, g in branches.items():
        ports[name] = mode_beam_splitter(mode_converter(name, g))

    readings, aux, scales = {}, {}, {}
    for beta, (branch, port) in SELECTED_PORTS.items():
        labelled, extra = cpm(ports[branch][port - 1])
        for alpha, (p, s) in labelled.items():
            readings[(alpha, beta)] = p
            scales[(alpha, beta)] = s
        for tag, (p, s) in extra.items():
            aux[f"CPM{beta}:{tag}"] = p
            scales[f"CPM{beta}:{tag}"] = s
    for branch in "AB":
        f = ports[branch][1]
        aux[f"MBS-{branch}:2"] = f.power
        scales[f"MBS-{branch}:2"] = f.power_scale
    return DetectorMap(readings, aux, scales)


def full_bench(sample):
    """Detector map for a radial probe passing through ``sample``.

    ``sample`` is a 2x2 Jones matrix or a :class:`DepolarizingEnsemble`; for
    an ensemble the detector powers are averaged with the member weights.
    """
    if isinstance(sample, DepolarizingEnsemble):
        out = None
        for w, t in sample:
            d = _bench_pure(t)
            if out is None:
                out = d.scaled(w)
            else:
                for k in out.readings:
                    out.readings[k] += w * d.readings[k]
                for k in out.auxiliary:
                    out.auxiliary[k] += w * d.auxiliary[k]
        return out
    return _bench_pure(np.asarray(sample, dtype=complex))


def calibrate(d):
    """Undo the known splitter fractions, giving the intensity matrix ``I[alpha, beta]``."""
    i = np.zeros((4, 4))
    for (a, b), v in d.readings.items():
        s = d.scales.get((a, b), 0.0)
        if s <= 0:
            raise InconsistentScale(f"detector {a}{b} has power scale {s!r}")
        i[a, b] = v / s
    return i


@dataclass(frozen=True)
class NoiseSpec:
    """Readout noise model.

    sigma_rel : relative Gaussian noise, ``r -> r (1 + sigma_rel g)``.
    dark : standard deviation of additive Gaussian noise, in reading units.
    photons : optional photon budget. The brightest labelled detector
        expects ``photons`` counts; every reading is replaced by a Poisson draw
        at the same counts-per-power rate.
    """

    sigma_rel: float = 0.0
    dark: float = 0.0
    photons: float = None

    def __post_init__(self):
        if self.sigma_rel < 0 or self.dark < 0:
            raise ValueError("noise parameters must be nonnegative")
        if self.photons is not None and self.photons <= 0:
            raise ValueError("photon budget must be positive")

    @property
    def is_null(self):
        return self.sigma_rel == 0 and self.dark == 0 and self.photons is None


def noisy_readout(d, model, rng):
    """Apply ``model`` to every reading of ``d``; ``rng`` is a Generator or a seed.

    Readings are clamped at zero. Deterministic for a fixed seed.
    """
    if not isinstance(rng, np.random.Generator):
        from .rng import make_rng

        rng = make_rng(rng)
    if model.is_null:
        return DetectorMap(dict(d.readings), dict(d.auxiliary), dict(d.scales))
    keys = sorted(d.readings) + sorted(d.auxiliary)
    vals = np.array([d.readings[k] for k in sorted(d.readings)] + [d.auxiliary[k] for k in sorted(d.auxiliary)])
    if model.photons is not None:
        peak = max(d.readings.values()) if d.readings else vals.max(initial=0.0)
        if peak > 0:
            rate = model.photons / peak
            vals = rng.poisson(vals * rate) / rate
    if model.sigma_rel:
        vals = vals * (1 + model.sigma_rel * rng.standard_normal(vals.shape))
    if model.dark:
        vals = vals + model.dark * rng.standard_normal(vals.shape)
    vals = np.clip(vals, 0.0, None)
    n = len(d.readings)
    readings = {k: float(v) for k, v in zip(keys[:n], vals[:n])}
    aux = {k: float(v) for k, v in zip(keys[n:], vals[n:])}
    return DetectorMap(readings, aux, dict(d.scales))


def postselected_amplitudes(t):
    """Polarization amplitudes leaving the four selected MBS ports, indexed by beta.

    Each is a 2-vector proportional to ``T e / sqrt2`` for the postselected input
    polarization ``e`` (e_x, e_y, e_+, e_R), up to a global phase.
    """
    e = apply_to_pol(t, radial_beam())
    out = {}
    for beta, (branch, port) in SELECTED_PORTS.items():
        f = mode_beam_splitter(mode_converter(branch, PortField(e)))[port - 1]
        a = f.amplitudes.reshape(2, 2)
        out[beta] = a[:, port - 1]
    return out
