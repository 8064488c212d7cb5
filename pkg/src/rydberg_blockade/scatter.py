"""Single-photon scattering off the even waveguide mode.

Units: the group velocity is 1, so lengths and times share one unit and
every rate or detuning is an inverse length.  All helpers are vectorized
over numpy arrays and accept complex detunings where the closed forms
need them (evaluation at ``delta - i*epsilon``).
"""

from dataclasses import dataclass
import math

import numpy as np

from .errors import DomainError, ParameterError


@dataclass(frozen=True)
class SystemParams:
    """Atomic parameters.

    Attributes:
        gamma: decay rate of each atom into the waveguide.
        xi: Rydberg interaction shift of the doubly excited state.
    """

    gamma: float = 1.0
    xi: float = 0.0

    def __post_init__(self):
        if not (self.gamma > 0 and math.isfinite(self.gamma)):
            raise ParameterError(f"gamma must be positive and finite, got {self.gamma}")
        if not (self.xi >= 0 and math.isfinite(self.xi)):
            raise ParameterError(f"xi must be non-negative and finite, got {self.xi}")

    @property
    def g(self):
        """Coupling to the even mode, with g**2 = gamma / (2 pi)."""
        return math.sqrt(self.gamma / (2.0 * math.pi))

    @property
    def g0(self):
        """Coupling of a single atom to one propagation direction."""
        return self.g / math.sqrt(2.0)

    def with_xi(self, xi):
        return SystemParams(gamma=self.gamma, xi=xi)


@dataclass(frozen=True)
class PulseSpec:
    """Lorentzian single-photon wave packet.

    Attributes:
        delta_c: center detuning from the atomic transition.
        epsilon: half-width of the Lorentzian spectrum.
        l: distance of the packet front from the atoms at t = 0.
    """

    delta_c: float = 0.0
    epsilon: float = 0.01
    l: float = 0.0

    def __post_init__(self):
        if not (self.epsilon > 0 and math.isfinite(self.epsilon)):
            raise ParameterError(f"epsilon must be positive, got {self.epsilon}")
        if not (self.l >= 0 and math.isfinite(self.l)):
            raise ParameterError(f"l must be non-negative, got {self.l}")
        if not math.isfinite(self.delta_c):
            raise ParameterError("delta_c must be finite")

    @property
    def G1(self):
        """Amplitude normalization sqrt(epsilon / pi)."""
        return math.sqrt(self.epsilon / math.pi)


def heaviside(x):
    """Unit step with the convention theta(0) = 1."""
    return np.where(np.asarray(x) >= 0, 1.0, 0.0)


def _denominator(delta_k, gamma):
    d = np.asarray(delta_k, dtype=complex) + 1j * gamma
    if np.any(d == 0):
        raise DomainError("detuning sits on the pole delta = -i*gamma")
    return d


def _scalar(x):
    return x.item() if isinstance(x, np.ndarray) and x.ndim == 0 else x


def tbar(delta_k, params):
    """Even-mode phase factor (delta - i gamma) / (delta + i gamma)."""
    d = _denominator(delta_k, params.gamma)
    return _scalar((np.asarray(delta_k) - 1j * params.gamma) / d)


def transmission(delta_k, params):
    """Single-photon transmission amplitude delta / (delta + i gamma)."""
    d = _denominator(delta_k, params.gamma)
    return _scalar(np.asarray(delta_k) / d)


def reflection(delta_k, params):
    """Single-photon reflection amplitude -i gamma / (delta + i gamma)."""
    d = _denominator(delta_k, params.gamma)
    return _scalar(-1j * params.gamma / d)


def beta0(delta_k, pulse):
    """Initial even-mode amplitude of a Lorentzian packet.

    ``G1 exp(i delta l) / (delta - delta_c + i epsilon)``; the packet sits
    at ``x <= -l`` and moves towards the atoms.
    """
    dk = np.asarray(delta_k, dtype=float)
    val = pulse.G1 * np.exp(1j * dk * pulse.l) / (dk - pulse.delta_c + 1j * pulse.epsilon)
    return _scalar(val)


def input_wavefunction_single(x, pulse):
    """Real-space input photon, nonzero only for ``x <= -l``."""
    x = np.asarray(x, dtype=float)
    k = pulse.delta_c - 1j * pulse.epsilon
    # clip the exponent on the empty side to avoid overflow warnings
    arg = np.where(x <= -pulse.l, x + pulse.l, 0.0)
    val = -1j * math.sqrt(2 * math.pi) * pulse.G1 * np.exp(1j * k * arg) * heaviside(-x - pulse.l)
    return _scalar(val)


def output_wavefunction_single(x, t, pulse, params):
    """Long-time transmitted and reflected photon wave functions.

    Returns:
        (psi_r, psi_l): right-moving (transmitted) and left-moving
        (reflected) components in the laboratory frame at time ``t``.
    """
    x = np.asarray(x, dtype=float)
    k = pulse.delta_c - 1j * pulse.epsilon
    pre = -1j * math.sqrt(2 * math.pi) * pulse.G1
    ur = x - t + pulse.l
    ul = x + t - pulse.l
    psi_r = pre * transmission(k, params) * np.exp(1j * k * np.minimum(ur, 0.0)) * heaviside(-ur)
    psi_l = pre * reflection(k, params) * np.exp(-1j * k * np.maximum(ul, 0.0)) * heaviside(ul)
    return _scalar(psi_r), _scalar(psi_l)


_POWERS = {"dipole-dipole": 3, "van-der-Waals": 6}


def xi_from_distance(r, coefficient, law="van-der-Waals"):
    """Rydberg shift for interatomic distance ``r``: C / r**3 or C / r**6."""
    if law not in _POWERS:
        raise DomainError(f"unknown interaction law {law!r}; choose from {sorted(_POWERS)}")
    if not r > 0:
        raise DomainError(f"distance must be positive, got {r}")
    if not coefficient > 0:
        raise DomainError(f"coefficient must be positive, got {coefficient}")
    return coefficient / r ** _POWERS[law]
