import math
import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import trapezoid

from rydberg_blockade.errors import ParameterError, ValidityWarning
from rydberg_blockade.scatter import PulseSpec, SystemParams
from rydberg_blockade.twophoton import (
    Channel,
    Phi_ll,
    Phi_rr,
    TwoPhotonInput,
    channel_amplitude,
    check_validity,
    d0,
    g2_norm,
    input_wavefunction_two,
    j_correlation,
    longtime_d,
    output_norm_partition,
    output_wavefunction_two,
    phi_ll,
    phi_rr,
    relative_wavefunction,
)

det = st.floats(-5, 5)
xis = st.floats(0, 30)


def make(E=0.0, dr=0.0, eps=0.01, l1=0.0, l2=None):
    return TwoPhotonInput.from_detunings(E, dr, eps, l1, l2)


def test_input_ordering_enforced():
    with pytest.raises(ParameterError):
        TwoPhotonInput(PulseSpec(0, 0.1, 1.0), PulseSpec(0, 0.1, 2.0))
    with pytest.raises(ParameterError):
        TwoPhotonInput(PulseSpec(0, 0.1, 1.0), PulseSpec(0, 0.2, 0.0))


def test_detuning_parametrization():
    inp = make(E=4.0, dr=0.5, eps=0.02, l1=3.0, l2=1.0)
    assert (inp.delta1, inp.delta2) == (2.5, 1.5)
    assert inp.E_total == 4.0 and inp.delta_rel == 0.5
    assert (inp.l1, inp.l2, inp.epsilon) == (3.0, 1.0, 0.02)


def test_g2_norm_identical_photons():
    assert g2_norm(make(eps=0.1)) == pytest.approx(0.1 / math.pi / math.sqrt(2))


def test_validity_warning():
    with pytest.warns(ValidityWarning):
        check_validity(make(eps=0.1), SystemParams())
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        check_validity(make(eps=0.01), SystemParams())


@given(det, det, det, st.floats(0.01, 0.5))
def test_d0_symmetric(p, q, E, eps):
    inp = make(E=E, dr=0.3, eps=eps, l1=2.0, l2=1.0)
    assert d0(p, q, inp) == pytest.approx(d0(q, p, inp), rel=1e-12, abs=1e-300)


@given(det, det, xis)
def test_longtime_symmetric(p, q, xi):
    inp = make(E=1.0, dr=0.2, eps=0.05, l1=1.0, l2=0.5)
    params = SystemParams(xi=xi)
    a, b = longtime_d(p, q, inp, params), longtime_d(q, p, inp, params)
    assert a == pytest.approx(b, rel=1e-10, abs=1e-14)


@given(det, xis)
def test_correlation_vanishes_on_two_photon_resonance(p, xi):
    inp = make(E=1.0, eps=0.05)
    assert abs(j_correlation(p, 2 * xi - p, inp, SystemParams(xi=xi))) < 1e-12


@given(det, det)
def test_channel_swap_symmetry(p, q):
    inp = make(E=0.5, eps=0.05)
    params = SystemParams(xi=2.0)
    rl = channel_amplitude("rl", p, q, inp, params)
    lr = channel_amplitude("lr", q, p, inp, params)
    assert rl == pytest.approx(lr, rel=1e-12, abs=1e-300)


@given(det, det, xis)
def test_channels_recombine_to_even_amplitude(p, q, xi):
    # T + R = tbar, so the four channels add up to half the even-mode amplitude
    inp = make(E=0.5, eps=0.05)
    params = SystemParams(xi=xi)
    total = sum(channel_amplitude(c, p, q, inp, params) for c in Channel)
    assert 2 * total == pytest.approx(longtime_d(p, q, inp, params), rel=1e-10, abs=1e-14)


def test_norm_partition_sums_to_one():
    parts = output_norm_partition(make(eps=0.05), SystemParams(xi=2.0))
    assert sum(parts.values()) == pytest.approx(1.0, abs=0.02)
    assert parts[Channel.rl] == pytest.approx(parts[Channel.lr], rel=1e-4)


def test_input_wavefunction_normalized_and_symmetric():
    inp = make(eps=0.2, dr=0.1)
    x = np.linspace(-80, 0, 1601)
    X1, X2 = np.meshgrid(x, x, indexing="ij")
    psi = input_wavefunction_two(X1, X2, inp)
    assert np.allclose(psi, psi.T)
    assert trapezoid(trapezoid(np.abs(psi) ** 2, x), x) == pytest.approx(1.0, rel=1e-3)
    assert input_wavefunction_two(0.5, -1.0, inp) == 0


@given(st.floats(-10, 10), xis, det)
def test_relative_wavefunction_even(x, xi, E):
    inp = make(E=E, dr=0.3)
    params = SystemParams(xi=xi)
    for side in ("rr", "ll"):
        phi = relative_wavefunction(side, inp, params, warn=False)
        assert phi(x) == pytest.approx(phi(-x), abs=1e-12)


def test_relative_wavefunction_decays_to_uncorrelated():
    inp = make()
    params = SystemParams(xi=2.0)
    phi = relative_wavefunction("ll", inp, params)
    assert abs(phi.correlated(40.0)) < 1e-15
    assert phi(40.0) == pytest.approx(phi.a * math.cos(phi.delta * 40.0), abs=1e-15)


def test_no_correlation_without_interaction():
    inp = make()
    x = np.linspace(-6, 6, 121)
    assert np.max(np.abs(phi_rr(x, inp, SystemParams(xi=0.0))) ** 2) <= 25 * 0.01 ** 2


def test_blockade_suppresses_reflected_pairs():
    inp = make()
    assert abs(phi_ll(0.0, inp, SystemParams(xi=20.0))) ** 2 < 0.01


def test_relative_wavefunction_rejects_mixed_channel():
    with pytest.raises(ParameterError):
        relative_wavefunction("rl", make(), SystemParams())


def test_comoving_output_factorizes():
    inp = make(E=1.0, eps=0.02)
    params = SystemParams(xi=2.0)
    x1 = np.array([-3.0, -1.0, -0.2])
    x2 = np.array([-0.5, -4.0, -0.3])
    psi = output_wavefunction_two("rr", x1, x2, 0.0, inp, params, frame="comoving")
    xc, x = (x1 + x2) / 2, x1 - x2
    phi = relative_wavefunction("rr", inp, params)
    env = np.exp(1j * (inp.E_total - 2j * inp.epsilon) * xc)
    ratio = psi / (env * phi(x))
    assert np.allclose(ratio, ratio[0])


def test_lab_frame_translates():
    inp = make(E=0.0, eps=0.02)
    params = SystemParams(xi=1.0)
    a = output_wavefunction_two("ll", 3.0, 4.0, 0.0, inp, params, frame="comoving")
    b = output_wavefunction_two("ll", 3.0 - 7.0, 4.0 - 7.0, 7.0, inp, params, frame="lab")
    assert a == pytest.approx(b)


def test_Phi_support_respects_fronts():
    inp = make(eps=0.02, l1=2.0, l2=1.0)
    params = SystemParams(xi=1.0)
    # centre of mass ahead of both fronts: nothing has arrived
    assert Phi_rr(0.0, 5.0, 0.0, inp, params) == 0
    assert Phi_ll(0.0, -5.0, 0.0, inp, params) == 0
    assert Phi_rr(0.0, -5.0, 0.0, inp, params) != 0


def test_output_frame_validation():
    with pytest.raises(ParameterError):
        output_wavefunction_two("rr", 0.0, 0.0, 0.0, make(), SystemParams(), frame="moving")
    with pytest.raises(ParameterError):
        output_wavefunction_two("rl", 0.0, 0.0, 0.0, make(), SystemParams())
