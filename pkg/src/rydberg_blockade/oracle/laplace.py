"""Laplace-domain solution for the one-photon-one-excitation amplitude B_k.

``laplace_Bk_closed`` evaluates the closed-form transform of B_k(t) for
the two-photon initial state; ``laplace_numeric`` transforms a sampled
time series so the two can be compared.
"""

import math

import numpy as np
from scipy import integrate

from ..errors import DomainError, InsufficientHorizonError
from ..twophoton import g2_norm

HORIZON_DECAY = 1e-6
TAIL_TOLERANCE = 1e-4


def _check_poles(values):
    for name, v in values.items():
        if v == 0:
            raise DomainError(f"closed-form transform hits a pole: {name} = 0")


def laplace_Bk_closed(s, delta_k, inp, params):
    """Closed-form Laplace transform of B_k(t), continuum normalization.

    Requires Re(s) > 0 and the input ordering ``l1 >= l2`` (enforced by
    TwoPhotonInput).  All amplitudes start from the two-photon packet with
    both atoms in the ground state.
    """
    s = complex(s)
    if not s.real > 0:
        raise DomainError(f"need Re(s) > 0, got s={s}")
    dk = float(delta_k)
    gam, xi = params.gamma, params.xi
    eps = inp.epsilon
    d1, d2 = inp.delta1, inp.delta2
    l1, l2 = inp.l1, inp.l2
    L = l1 - l2
    den = {
        "dk - i(s+gamma)": dk - 1j * (s + gam),
        "dk - d2 + i eps": dk - d2 + 1j * eps,
        "dk + d1 - i(s+eps)": dk + d1 - 1j * (s + eps),
        "dk - d1 + i eps": dk - d1 + 1j * eps,
        "dk + d2 - i(s+eps)": dk + d2 - 1j * (s + eps),
        "dk + i gamma": dk + 1j * gam,
        "s + eps + i(dk+d1)": s + eps + 1j * (dk + d1),
        "gamma - eps - i d2": gam - eps - 1j * d2,
        "s + gamma + eps + i d1": s + gam + eps + 1j * d1,
        "-gamma + i dk": -gam + 1j * dk,
        "s + gamma + i xi": s + gam + 1j * xi,
        "s + i d1 + i d2 + 2 eps": s + 1j * d1 + 1j * d2 + 2 * eps,
        "i gamma + d2 - i eps": 1j * gam + d2 - 1j * eps,
        "d2 - dk - i eps": d2 - dk - 1j * eps,
        "s + gamma + i d2 + eps": s + gam + 1j * d2 + eps,
        "s + i d2 + i dk + eps": s + 1j * d2 + 1j * dk + eps,
    }
    _check_poles(den)

    ret_k = np.exp(-1j * L * dk)
    f1 = (
        np.exp(-s * l1) * ret_k / ((dk - d2 + 1j * eps) * (dk + d1 - 1j * (s + eps)))
        + np.exp(-s * l2) / ret_k / ((dk - d1 + 1j * eps) * (dk + d2 - 1j * (s + eps)))
    )
    f2 = ret_k / ((dk + 1j * gam) * (dk - d2 + 1j * eps) * (s + eps + 1j * (dk + d1))) + math.exp(-L * gam) / (
        (gam - eps - 1j * d2) * (s + gam + eps + 1j * d1)
    ) * (1 / (-gam + 1j * dk) + 1 / (s + gam + 1j * xi))
    f3 = np.exp(-L * (1j * d2 + eps)) / (s + 1j * d1 + 1j * d2 + 2 * eps) * (
        1 / ((1j * gam + d2 - 1j * eps) * (d2 - dk - 1j * eps))
        - 1 / ((s + gam + 1j * d2 + eps) * (s + 1j * d2 + 1j * dk + eps))
        - 1 / ((gam - 1j * d2 - eps) * (s + gam + 1j * xi))
        - 1 / ((s + gam + 1j * d2 + eps) * (s + gam + 1j * xi))
    )
    pre = 2 * math.pi * params.g * g2_norm(inp) / (dk - 1j * (s + gam))
    return complex(pre * (f1 + 2 * np.exp(-s * l1) * gam * (f2 + f3)))


def laplace_numeric(times, samples, s):
    """Composite Simpson estimate of the integral of exp(-s t) B(t) from t[0] to t[-1].

    Raises:
        DomainError: if Re(s) <= 0.
        InsufficientHorizonError: if the series is too short, either
            exp(-Re(s) t_end) >= 1e-6 or the bound on the neglected tail
            exceeds 1e-4 of the integral.
    """
    s = complex(s)
    if not s.real > 0:
        raise DomainError(f"need Re(s) > 0, got s={s}")
    t = np.asarray(times, dtype=float)
    b = np.asarray(samples, dtype=complex)
    if t.ndim != 1 or t.shape != b.shape or t.size < 3:
        raise ValueError("times and samples must be matching 1-D arrays of length >= 3")
    T = t[-1]
    decay = math.exp(-s.real * T)
    if decay >= HORIZON_DECAY:
        raise InsufficientHorizonError(
            f"exp(-Re(s) t_end) = {decay:.3g} is not below {HORIZON_DECAY:g}; extend the series beyond t={T}",
            estimate=decay,
        )
    val = integrate.simpson(np.exp(-s * t) * b, x=t)
    tail = float(np.max(np.abs(b), initial=0.0)) * decay / s.real
    if tail > TAIL_TOLERANCE * abs(val) and tail > 0:
        raise InsufficientHorizonError(f"tail bound {tail:.3g} exceeds {TAIL_TOLERANCE:g} of |integral|", estimate=val)
    return complex(val)
