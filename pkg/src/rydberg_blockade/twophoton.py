"""Two-photon scattering: initial state, long-time amplitudes and
real-space relative wave functions.

The even-mode two-photon amplitude is written ``D[p, q]`` with ``p`` and
``q`` the detunings of the two photons.  Long-time amplitudes are returned
with the free phase ``exp(-i (p + q) t)`` stripped; the real-space
assemblers put it back.
"""

from dataclasses import dataclass
import enum
import math
import warnings

import numpy as np

from .errors import ParameterError, ValidityWarning
from .scatter import PulseSpec, heaviside, reflection, tbar, transmission

N_RR = 1.0 / (2.0 * math.sqrt(2.0) * math.pi)
N_LL = N_RR

# gamma / epsilon ratio below which the narrow-band reduction is not trusted
VALIDITY_RATIO = 20.0


@dataclass(frozen=True)
class TwoPhotonInput:
    """Ordered pair of Lorentzian photons sharing one width.

    ``pulse1`` is the photon whose front is farther away (``l1 >= l2``).
    """

    pulse1: PulseSpec
    pulse2: PulseSpec

    def __post_init__(self):
        if self.pulse1.epsilon != self.pulse2.epsilon:
            raise ParameterError("both photons must share the same epsilon")
        if not self.pulse1.l >= self.pulse2.l:
            raise ParameterError(f"need l1 >= l2, got l1={self.pulse1.l}, l2={self.pulse2.l}")

    @classmethod
    def from_detunings(cls, E=0.0, delta_rel=0.0, epsilon=0.01, l1=0.0, l2=None):
        """Build from total detuning ``E`` and relative detuning ``delta_rel``."""
        l2 = l1 if l2 is None else l2
        d1 = E / 2.0 + delta_rel
        d2 = E / 2.0 - delta_rel
        return cls(PulseSpec(d1, epsilon, l1), PulseSpec(d2, epsilon, l2))

    @property
    def epsilon(self):
        return self.pulse1.epsilon

    @property
    def delta1(self):
        return self.pulse1.delta_c

    @property
    def delta2(self):
        return self.pulse2.delta_c

    @property
    def l1(self):
        return self.pulse1.l

    @property
    def l2(self):
        return self.pulse2.l

    @property
    def E_total(self):
        return self.delta1 + self.delta2

    @property
    def delta_rel(self):
        return (self.delta1 - self.delta2) / 2.0


class Channel(enum.Enum):
    """Output direction of the two photons (r = transmitted, l = reflected)."""

    rr = "rr"
    rl = "rl"
    lr = "lr"
    ll = "ll"


def check_validity(inp, params):
    """Warn when gamma / epsilon is below the narrow-band threshold."""
    if params.gamma < VALIDITY_RATIO * inp.epsilon:
        warnings.warn(
            f"gamma/epsilon = {params.gamma / inp.epsilon:.3g} < {VALIDITY_RATIO:g}; "
            "relative wave functions carry O(epsilon/gamma) corrections",
            ValidityWarning,
            stacklevel=3,
        )


def g2_norm(inp):
    """Normalization constant G2 of the symmetrized two-photon packet."""
    eps = inp.epsilon
    dd = inp.delta1 - inp.delta2
    overlap = 4 * eps ** 2 * math.exp(-2 * eps * (inp.l1 - inp.l2)) / (dd ** 2 + 4 * eps ** 2)
    return (eps / math.pi) / math.sqrt(1.0 + overlap)


def _lorentz(dk, delta, eps, l):
    return np.exp(1j * dk * l) / (dk - delta + 1j * eps)


def d0(delta_p, delta_q, inp):
    """Initial two-photon amplitude, symmetric in ``p`` and ``q``."""
    p = np.asarray(delta_p, dtype=float)
    q = np.asarray(delta_q, dtype=float)
    eps = inp.epsilon
    a = _lorentz(p, inp.delta1, eps, inp.l1) * _lorentz(q, inp.delta2, eps, inp.l2)
    b = _lorentz(q, inp.delta1, eps, inp.l1) * _lorentz(p, inp.delta2, eps, inp.l2)
    return g2_norm(inp) * (a + b)


def j_correlation(delta_p, delta_q, inp, params):
    """Scattering-induced correlated part of the long-time amplitude.

    Depends on ``p`` and ``q`` only through ``p + q`` and the product of the
    single-atom poles, so it is symmetric.  It vanishes on the two-photon
    resonance line ``p + q = 2 xi``.
    """
    p = np.asarray(delta_p, dtype=float)
    q = np.asarray(delta_q, dtype=float)
    gam, xi, eps = params.gamma, params.xi, inp.epsilon
    d1, d2 = inp.delta1, inp.delta2
    L = inp.l1 - inp.l2
    S = p + q
    pre = (
        4 * g2_norm(inp) * gam ** 2 * np.exp(1j * S * inp.l1)
        / ((p + 1j * gam) * (q + 1j * gam))
        * (S - 2 * xi) / (S - xi + 1j * gam)
        / (S - d1 - d2 + 2j * eps)
    )
    ret = np.exp(-(1j * d2 + eps) * L)
    dec = np.exp(-gam * L)
    c = 1j * gam + d2 - 1j * eps
    bracket = (ret / c + ret / (S - d2 + 1j * eps + 1j * gam)) - (
        dec / c - dec / (S - d1 + 1j * eps + 1j * gam)
    )
    return pre * bracket


def longtime_d(delta_p, delta_q, inp, params):
    """Long-time two-photon amplitude without its free phase."""
    return (
        tbar(delta_p, params) * tbar(delta_q, params) * d0(delta_p, delta_q, inp)
        + j_correlation(delta_p, delta_q, inp, params)
    )


def _side_amplitudes(c, delta_p, delta_q, params):
    first = transmission(delta_p, params) if c.value[0] == "r" else reflection(delta_p, params)
    second = transmission(delta_q, params) if c.value[1] == "r" else reflection(delta_q, params)
    return first * second


def channel_amplitude(c, delta_p, delta_q, inp, params):
    """Long-time amplitude for photon ``p`` into side ``c[0]`` and ``q`` into ``c[1]``."""
    c = Channel(c)
    X = _side_amplitudes(c, delta_p, delta_q, params)
    return 0.5 * (X * d0(delta_p, delta_q, inp) + j_correlation(delta_p, delta_q, inp, params) / 4)


def _graded_axis(centers, scale, half_width, du):
    """Sorted nodes on [-half_width, half_width] refined around ``centers``."""
    umax = math.asinh(2 * half_width / scale)
    u = np.arange(-umax, umax + du / 2, du)
    base = scale * np.sinh(u)
    nodes = [np.asarray(c, dtype=float)[..., None] + base for c in centers]
    x = np.concatenate(nodes, axis=-1)
    x = np.clip(x, -half_width, half_width)
    return np.sort(x, axis=-1)


def _trapezoid(y, x):
    return 0.5 * np.sum((y[..., 1:] + y[..., :-1]) * np.diff(x, axis=-1), axis=-1)


def output_norm_partition(inp, params, window=40.0, du=0.02):
    """Probability carried by each output channel.

    Integrates ``2 * |D^c|**2`` over the square ``|p|, |q| <= window``, which
    equals four times the integral over the ordered region ``p > q``.
    Nested trapezoid rules on grids refined around the Lorentzian centers;
    each row in ``q`` is also refined around the correlated ridge
    ``p + q = E``.

    Returns:
        dict mapping each Channel to its probability; the values sum to 1
        up to quadrature and window-truncation error.
    """
    eps = inp.epsilon
    d1, d2, E = inp.delta1, inp.delta2, inp.E_total
    p = _graded_axis([d1, d2], eps, window, du)
    rows = {c: np.empty(p.size) for c in Channel}
    block = 64
    for i in range(0, p.size, block):
        pb = p[i:i + block, None]
        centers = [np.full(pb.shape[0], d1), np.full(pb.shape[0], d2), E - pb[:, 0]]
        q = _graded_axis(centers, eps, window, du)
        P = np.broadcast_to(pb, q.shape)
        dz = d0(P, q, inp)
        jj = j_correlation(P, q, inp, params)
        for c in Channel:
            amp = 0.5 * (_side_amplitudes(c, P, q, params) * dz + jj / 4)
            rows[c][i:i + block] = _trapezoid(np.abs(amp) ** 2, q)
    return {c: 2.0 * float(_trapezoid(rows[c], p)) for c in Channel}


def input_wavefunction_two(x1, x2, inp):
    """Real-space two-photon input state, symmetric in ``x1`` and ``x2``."""
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    eps = inp.epsilon

    def half(a, b):
        ua = np.minimum(a + inp.l1, 0.0)
        ub = np.minimum(b + inp.l2, 0.0)
        return (
            np.exp((1j * inp.delta1 + eps) * ua) * np.exp((1j * inp.delta2 + eps) * ub)
            * heaviside(-a - inp.l1) * heaviside(-b - inp.l2)
        )

    return -4 * math.pi ** 2 * N_RR * g2_norm(inp) * (half(x1, x2) + half(x2, x1))


def _correlated_ratio(inp, params):
    E, eps, xi, gam = inp.E_total, inp.epsilon, params.xi, params.gamma
    return (E - 2 * xi - 2j * eps) / (E - xi - 2j * eps + 1j * gam)


def _pair_amplitudes(inp, params):
    k1 = inp.delta1 - 1j * inp.epsilon
    k2 = inp.delta2 - 1j * inp.epsilon
    TT = transmission(k1, params) * transmission(k2, params)
    RR = reflection(k1, params) * reflection(k2, params)
    return TT, RR


def _bound_decay(inp, params):
    return inp.E_total / 2 - 1j * inp.epsilon + 1j * params.gamma


@dataclass(frozen=True)
class RelativeWavefunction:
    """Relative wave function ``a cos(delta x) + b exp(i k |x|)``.

    Attributes:
        a: weight of the uncorrelated (independent scattering) part.
        b: weight of the correlated part.
        delta: relative detuning.
        k: complex wave number of the correlated part, Im(k) > 0.
    """

    a: complex
    b: complex
    delta: float
    k: complex

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return self.a * np.cos(self.delta * x) + self.b * np.exp(1j * self.k * np.abs(x))

    def correlated(self, x):
        return self.b * np.exp(1j * self.k * np.abs(np.asarray(x, dtype=float)))

    def abs2(self, x):
        return np.abs(self(x)) ** 2


def relative_wavefunction(side, inp, params, warn=True):
    """Relative wave function for ``side`` in {"rr", "ll"} as an evaluator."""
    side = Channel(side)
    if warn:
        check_validity(inp, params)
    TT, RR = _pair_amplitudes(inp, params)
    b = -0.5 * RR * _correlated_ratio(inp, params)
    if side is Channel.rr:
        a = TT
    elif side is Channel.ll:
        a = RR
    else:
        raise ParameterError("relative wave functions exist only for rr and ll")
    return RelativeWavefunction(complex(a), complex(b), inp.delta_rel, complex(_bound_decay(inp, params)))


def phi_rr(x, inp, params):
    """Relative wave function of two transmitted photons (even in ``x``)."""
    return relative_wavefunction("rr", inp, params)(x)


def phi_ll(x, inp, params):
    """Relative wave function of two reflected photons (even in ``x``)."""
    return relative_wavefunction("ll", inp, params)(x)


def _Phi(side, x, xc, t, inp, params):
    check_validity(inp, params)
    x = np.asarray(x, dtype=float)
    xc = np.asarray(xc, dtype=float)
    TT, RR = _pair_amplitudes(inp, params)
    dl = inp.delta_rel
    if side == "rr":
        pair = TT
        sgn = 1.0
        step_a = heaviside(-xc - x / 2 + t - inp.l1) * heaviside(-xc + x / 2 + t - inp.l2)
        step_b = heaviside(-xc + x / 2 + t - inp.l1) * heaviside(-xc - x / 2 + t - inp.l2)
        step_c = heaviside(-xc + t - np.abs(x) / 2 - inp.l1)
    else:
        pair = RR
        sgn = -1.0
        step_a = heaviside(xc + x / 2 + t - inp.l1) * heaviside(xc - x / 2 + t - inp.l2)
        step_b = heaviside(xc - x / 2 + t - inp.l1) * heaviside(xc + x / 2 + t - inp.l2)
        step_c = heaviside(xc + t - np.abs(x) / 2 - inp.l1)
    indep = pair * (np.exp(sgn * 1j * dl * x) * step_a + np.exp(-sgn * 1j * dl * x) * step_b)
    corr = RR * _correlated_ratio(inp, params) * np.exp(1j * _bound_decay(inp, params) * np.abs(x)) * step_c
    return indep - corr


def Phi_rr(x, xc, t, inp, params):
    """Relative part of the transmitted state including its support, any l1 >= l2."""
    return _Phi("rr", x, xc, t, inp, params)


def Phi_ll(x, xc, t, inp, params):
    """Relative part of the reflected state including its support, any l1 >= l2."""
    return _Phi("ll", x, xc, t, inp, params)


def output_wavefunction_two(channel, x1, x2, t, inp, params, frame="lab"):
    """Long-time two-photon wave function for two transmitted or two reflected photons.

    Args:
        channel: "rr" or "ll".
        x1, x2: photon coordinates.
        t: time; ignored in the co-moving frame.
        frame: "lab" or "comoving".  The co-moving frame follows the
            packet (``x = x' + t`` for rr, ``x = x' - t`` for ll), where the
            state no longer depends on time.
    """
    channel = Channel(channel)
    if channel not in (Channel.rr, Channel.ll):
        raise ParameterError("real-space output is provided for rr and ll only")
    if frame == "comoving":
        t = 0.0
    elif frame != "lab":
        raise ParameterError(f"unknown frame {frame!r}")
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    xc = (x1 + x2) / 2
    x = x1 - x2
    E, eps = inp.E_total, inp.epsilon
    common = (
        -4 * math.pi ** 2 * N_RR * g2_norm(inp)
        * np.exp(1j * (E / 2 - 1j * eps) * (inp.l1 + inp.l2))
        * np.exp(1j * inp.delta_rel * (inp.l1 - inp.l2))
    )
    if channel is Channel.rr:
        arg = xc - t
        Phi = Phi_rr(x, xc, t, inp, params)
    else:
        arg = -xc - t
        Phi = Phi_ll(x, xc, t, inp, params)
    # the envelope grows outside the support; clip it where Phi is zero
    arg = np.where(Phi != 0, arg, 0.0)
    return common * np.exp(1j * (E - 2j * eps) * arg) * Phi
