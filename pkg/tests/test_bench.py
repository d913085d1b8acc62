import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from radialpol.bench import (
    DetectorMap,
    InconsistentScale,
    NoiseSpec,
    PortField,
    beamsplitter50,
    calibrate,
    cpm,
    full_bench,
    inline_hwp,
    mbs_net,
    mirror,
    mode_beam_splitter,
    mode_converter,
    noisy_readout,
    postselected_amplitudes,
)
from radialpol.elements import (
    U_PI,
    DepolarizingEnsemble,
    apply_to_pol,
    half_wave,
    projector,
    random_passive,
    random_unitary,
)
from radialpol.polarimetry import (
    abstract_intensities,
    intensities_to_two_dof_stokes,
    mueller_depolarizing,
    mueller_from_jones,
    two_dof_reconstruct,
)
from radialpol.rng import make_rng
from radialpol.states import KET_0, KET_1, KET_L, KET_PLUS, KET_R, coherency_of, phase_distance, product_beam, radial_beam

from conftest import random_pure

R2 = 1 / np.sqrt(2)


def beam(pol, spa):
    return PortField(product_beam(pol, spa))


def test_mirror_examples():
    # psi01 is even under x -> -x: e_x picks up -i, e_y +i
    np.testing.assert_allclose(mirror(beam(KET_0, KET_1)).amplitudes, [0, -1j, 0, 0], atol=1e-15)
    np.testing.assert_allclose(mirror(beam(KET_1, KET_1)).amplitudes, [0, 0, 0, 1j], atol=1e-15)
    e = random_pure(make_rng(1))
    np.testing.assert_allclose(mirror(mirror(PortField(e))).amplitudes, -e, atol=1e-15)


def test_inline_hwp():
    f = beam(KET_1, KET_0)
    np.testing.assert_allclose(inline_hwp(f).amplitudes, apply_to_pol(U_PI, f.amplitudes), atol=0)
    np.testing.assert_allclose(inline_hwp(beam(KET_0, KET_0)).amplitudes, [-1j, 0, 0, 0], atol=1e-15)


def test_beamsplitter_example():
    o1, o2 = beamsplitter50(beam(KET_0, KET_0), PortField.vacuum())
    np.testing.assert_allclose(o1.amplitudes, [R2, 0, 0, 0], atol=1e-15)
    # reflected e_x psi10 is odd-odd under the mirror: i * (+1)
    np.testing.assert_allclose(o2.amplitudes, [1j * R2, 0, 0, 0], atol=1e-15)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32))
def test_beamsplitter_conserves_power(seed):
    rng = make_rng(seed)
    f1, f2 = PortField(random_pure(rng)), PortField(0.3 * random_pure(rng))
    o1, o2 = beamsplitter50(f1, f2)
    assert o1.power + o2.power == pytest.approx(f1.power + f2.power, abs=1e-12)


def test_beamsplitter_scale_mismatch():
    with pytest.raises(ValueError):
        beamsplitter50(PortField(radial_beam(), 1.0), PortField(radial_beam(), 0.5))
    o1, _ = beamsplitter50(PortField(radial_beam(), 0.5), PortField.vacuum(1.0))
    assert o1.power_scale == 0.5


@pytest.mark.parametrize(
    "pol,spa,port",
    [(KET_0, KET_0, 0), (KET_1, KET_0, 0), (KET_0, KET_1, 1), (KET_1, KET_1, 1)],
)
def test_mbs_routes_modes(pol, spa, port):
    f = beam(pol, spa)
    outs = mode_beam_splitter(f)
    assert outs[port].power == pytest.approx(1, abs=1e-14)
    assert outs[1 - port].power == pytest.approx(0, abs=1e-28)
    np.testing.assert_allclose(outs[port].amplitudes, f.amplitudes, atol=1e-14)


def test_mbs_splits_radial_beam():
    p1, p2 = mode_beam_splitter(PortField(radial_beam()))
    assert phase_distance(p1.amplitudes, R2 * product_beam(KET_0, KET_0)) < 1e-14
    assert phase_distance(p2.amplitudes, R2 * product_beam(KET_1, KET_1)) < 1e-14


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32))
def test_mbs_composition_matches_net_relation(seed):
    f = PortField(random_pure(make_rng(seed)), 0.25)
    # the built-up interferometer and the net relation differ by port phases -1, +1
    for phase, got, net in zip((-1, 1), mode_beam_splitter(f), mbs_net(f)):
        np.testing.assert_allclose(got.amplitudes, phase * net.amplitudes, atol=1e-14)
        assert got.power_scale == net.power_scale
    p1, p2 = mode_beam_splitter(f)
    assert abs(p1.amplitudes[1]) < 1e-14 and abs(p1.amplitudes[3]) < 1e-14
    assert abs(p2.amplitudes[0]) < 1e-14 and abs(p2.amplitudes[2]) < 1e-14


def test_mode_converters_on_radial_beam():
    # converter B takes psi+ to psi10, converter A takes psi_L to psi10 (with phases)
    b = mode_converter("B", PortField(radial_beam()))
    a = mode_converter("A", PortField(radial_beam()))
    c = mode_converter("C", PortField(radial_beam()))
    np.testing.assert_allclose(c.amplitudes, radial_beam(), atol=0)
    # the psi10 component after B carries the e_+ polarization
    assert phase_distance(b.amplitudes.reshape(2, 2)[:, 0], KET_PLUS * R2) < 1e-14
    # after A, the psi10 component carries e_R
    assert phase_distance(a.amplitudes.reshape(2, 2)[:, 0], KET_R * R2) < 1e-14
    with pytest.raises(ValueError):
        mode_converter("D", PortField(radial_beam()))


def test_cpm_examples():
    lab, aux = cpm(beam(KET_0, KET_0))
    assert lab[0] == pytest.approx((1 / 3, 1 / 3))
    assert lab[1][0] == pytest.approx(0, abs=1e-16)
    assert lab[2][0] == pytest.approx(1 / 6)
    assert lab[3][0] == pytest.approx(1 / 6)
    assert set(aux) == {"R", "-"}
    lab, aux = cpm(beam(KET_L, KET_0))
    assert lab[3][0] == pytest.approx(1 / 3)
    assert aux["R"][0] == pytest.approx(0, abs=1e-16)
    lab, aux = cpm(beam(KET_PLUS, KET_1))
    assert lab[2][0] == pytest.approx(1 / 3)
    assert aux["-"][0] == pytest.approx(0, abs=1e-16)


def test_full_bench_identity_matches_projector_oracle():
    d = full_bench(np.eye(2))
    assert len(d.readings) == 16 and len(d.auxiliary) == 10
    np.testing.assert_allclose(calibrate(d), abstract_intensities(coherency_of(radial_beam())), atol=1e-14)
    assert all(s == pytest.approx(1 / 9) for k, s in d.scales.items() if isinstance(k, tuple))


def test_full_bench_hwp_22_5():
    i = calibrate(full_bench(half_wave(np.pi / 8)))
    assert i[0, 0] == pytest.approx(0.25, abs=1e-12)
    assert i[2, 0] == pytest.approx(0.5, abs=1e-12)


def test_full_bench_horizontal_polarizer_darkens_beta1():
    # only the psi10 half of the radial beam carries e_x
    i = calibrate(full_bench(projector(0)))
    np.testing.assert_allclose(i[:, 1], 0, atol=1e-15)
    assert i[0, 0] == pytest.approx(0.5)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32))
def test_full_bench_conserves_power(seed):
    t = random_passive(make_rng(seed))
    d = full_bench(t)
    expected = np.linalg.norm(apply_to_pol(t, radial_beam())) ** 2
    assert d.total_power() == pytest.approx(expected, abs=1e-12)


def test_bench_equals_oracle_on_many_samples():
    ts = random_passive(make_rng(99), size=1000)
    worst = max(
        np.abs(two_dof_reconstruct(intensities_to_two_dof_stokes(calibrate(full_bench(t)))) - mueller_from_jones(t)).max()
        for t in ts
    )
    assert worst < 1e-9


def test_postselection(rng):
    t = random_passive(rng)
    got = postselected_amplitudes(t)
    # selected ports carry T e / sqrt2 for e = e_x, e_y, e_+ and e_R
    for beta, e in zip(range(4), (KET_0, KET_1, KET_PLUS, KET_R)):
        assert phase_distance(got[beta], t @ e * R2) < 1e-13
    # postselection does not select T e_- on the diagonal port
    assert phase_distance(got[2], t @ np.array([R2, -R2]) * R2) > 1e-3


def test_bench_ensemble_average(rng):
    ens = DepolarizingEnsemble([0.3, 0.7], random_unitary(rng, size=2))
    m = two_dof_reconstruct(intensities_to_two_dof_stokes(calibrate(full_bench(ens))))
    np.testing.assert_allclose(m, mueller_depolarizing(ens), atol=1e-12)


def test_calibrate_end_to_end_hwp():
    m = two_dof_reconstruct(intensities_to_two_dof_stokes(calibrate(full_bench(U_PI))))
    np.testing.assert_allclose(m, np.diag([1, -1, -1, 1]), atol=1e-12)


def test_calibrate_dark_and_bad_scale():
    d = full_bench(np.zeros((2, 2)))
    np.testing.assert_array_equal(calibrate(d), np.zeros((4, 4)))
    d.scales[(0, 0)] = 0.0
    with pytest.raises(InconsistentScale):
        calibrate(d)


def test_detector_map_validation():
    with pytest.raises(ValueError):
        DetectorMap({(0, 0): 1.0})
    with pytest.raises(ValueError):
        DetectorMap({(a, b): -1.0 for a in range(4) for b in range(4)})
    keys = sorted(full_bench(np.eye(2)).to_dict()["primary"])
    assert keys[0] == "00" and len(keys) == 16


def test_noise_null_is_identity():
    d = full_bench(half_wave(0.3))
    out = noisy_readout(d, NoiseSpec(), 5)
    assert out.readings == d.readings and out.auxiliary == d.auxiliary


def test_noise_is_deterministic_and_clamped():
    d = full_bench(projector(0))
    spec = NoiseSpec(sigma_rel=0.1, dark=0.01)
    a, b = noisy_readout(d, spec, 7), noisy_readout(d, spec, 7)
    assert a.readings == b.readings
    assert noisy_readout(d, spec, 8).readings != a.readings
    assert min(a.readings.values()) >= 0


def test_poisson_relative_fluctuation():
    d = full_bench(np.eye(2))
    peak = max(d.readings, key=d.readings.get)
    n = 1e6
    draws = np.array([noisy_readout(d, NoiseSpec(photons=n), make_rng(11, k)).readings[peak] for k in range(400)])
    rel = draws.std() / draws.mean()
    assert 0.8 / np.sqrt(n) < rel < 1.2 / np.sqrt(n)


@pytest.mark.parametrize("kwargs", [{"sigma_rel": -1}, {"dark": -0.1}, {"photons": 0}])
def test_noise_spec_validation(kwargs):
    with pytest.raises(ValueError):
        NoiseSpec(**kwargs)
