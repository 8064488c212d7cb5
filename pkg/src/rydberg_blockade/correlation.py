"""Second-order correlation functions of the scattered photon pairs.

All positions are in the frame co-moving with the outgoing packet, where
the two-photon state is stationary.  Delays ``tau`` are non-negative;
negative delays follow from evenness of the relative wave function.
"""

from dataclasses import dataclass, field
import cmath
import enum
import math
import warnings

import numpy as np
from scipy import integrate

from .errors import EmptySupportError, IllConditionedG2Error, QuadratureError
from .twophoton import (
    N_RR,
    _bound_decay,
    _correlated_ratio,
    _pair_amplitudes,
    check_validity,
    RelativeWavefunction,
    TwoPhotonInput,
    g2_norm,
    relative_wavefunction,
)
from .scatter import SystemParams

EPSREL = 1e-8
LIMIT = 10_000
# beyond this many decay lengths the correlated term is below 1e-13
TAIL_DECAY_LENGTHS = 30.0
# both parts of phi at the level of the neglected O(epsilon/gamma) terms
DEGENERACY_FACTOR = 25.0


class Side(enum.Enum):
    transmission = "transmission"
    reflection = "reflection"

    @property
    def channel(self):
        return "rr" if self is Side.transmission else "ll"


@dataclass(frozen=True)
class G2Request:
    """One g2(tau) evaluation.

    Attributes:
        side: transmission (two right-going photons) or reflection.
        tau_grid: non-negative delays.
        input: the two-photon input.
        params: atomic parameters.
        x1_ref: first detection point in the co-moving frame; None picks a
            point well inside the packet (see ``default_x1``).
    """

    side: Side
    tau_grid: tuple
    input: TwoPhotonInput
    params: SystemParams
    x1_ref: float = None

    def __post_init__(self):
        object.__setattr__(self, "side", Side(self.side))
        taus = tuple(float(t) for t in np.atleast_1d(self.tau_grid))
        if not taus:
            raise ValueError("tau_grid is empty")
        if min(taus) < 0:
            raise ValueError("delays must be non-negative")
        object.__setattr__(self, "tau_grid", taus)
        if self.x1_ref is None:
            object.__setattr__(self, "x1_ref", default_x1(self.side, self.input, max(taus), self.params))
        check_support(self.side, self.x1_ref, max(taus), self.input)


@dataclass
class G2Curve:
    """Tabulated g2(tau) with the request that produced it."""

    tau: np.ndarray
    g2: np.ndarray
    request: G2Request
    metadata: dict = field(default_factory=dict)


def default_x1(side, inp, tau_max, params):
    """First detection point ten decay lengths inside the support."""
    shift = 10.0 / params.gamma + tau_max
    if Side(side) is Side.transmission:
        return -inp.l1 - shift
    return inp.l1 + shift


def check_support(side, x1, tau_max, inp):
    """Raise EmptySupportError if (x1, x1 + tau_max) misses the packet."""
    if Side(side) is Side.transmission:
        ok = -x1 - inp.l1 - tau_max >= 0 and -x1 - inp.l1 >= 0
        where = f"need x1 + tau <= -l1 = {-inp.l1}"
    else:
        ok = x1 - inp.l1 >= 0 and x1 - inp.l1 + tau_max >= 0
        where = f"need x1 >= l1 = {inp.l1}"
    if not ok:
        raise EmptySupportError(f"x1={x1}, tau_max={tau_max} outside the support: {where}")


def _tail_constant(phi, X, epsilon):
    """Integral of exp(-2 eps x) |a cos(delta x)|^2 from X to infinity."""
    a2 = abs(phi.a) ** 2
    z = 2 * epsilon - 2j * phi.delta
    osc = (np.exp(-z * X) / z).real
    return 0.5 * a2 * (math.exp(-2 * epsilon * X) / (2 * epsilon) + osc)


def _quad(f, a, b):
    val, err = integrate.quad(f, a, b, epsrel=EPSREL, epsabs=0.0, limit=LIMIT, full_output=0)
    return val, err


def tail_integral(phi, lower, epsilon, gamma=1.0):
    """Integral of ``exp(-2 eps x) |phi(x)|^2`` from ``lower`` to infinity.

    Adaptive quadrature up to ``max(lower, 0) + 30/gamma``; beyond that the
    correlated part of ``phi`` is negligible and the remaining oscillatory
    tail is integrated in closed form.  The kink of ``|phi|`` at ``x = 0`` is
    a breakpoint.

    Args:
        phi: RelativeWavefunction, or any callable; a plain callable is
            integrated numerically all the way to infinity.
        lower: lower limit; may be negative.
        epsilon: packet width.
        gamma: decay rate, sets where the analytic tail starts.

    Raises:
        QuadratureError: if the error estimate exceeds the target.
    """
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")

    def f(x):
        return math.exp(-2 * epsilon * x) * abs(phi(x)) ** 2

    pieces = []
    if lower < 0:
        pieces.append((lower, 0.0))
    start = max(lower, 0.0)
    total, err = 0.0, 0.0
    if isinstance(phi, RelativeWavefunction):
        X = start + TAIL_DECAY_LENGTHS / gamma
        pieces.append((start, X))
        total += _tail_constant(phi, X, epsilon)
    else:
        pieces.append((start, np.inf))
    for a, b in pieces:
        with warnings.catch_warnings():
            warnings.simplefilter("error", integrate.IntegrationWarning)
            try:
                v, e = _quad(f, a, b)
            except integrate.IntegrationWarning as exc:
                raise QuadratureError(f"tail integral did not converge on [{a}, {b}]: {exc}", estimate=total) from exc
        total += v
        err += e
    if err > 10 * EPSREL * abs(total) + 1e-300 and err > 1e-14:
        raise QuadratureError(f"tail integral error {err:.3g} above tolerance", estimate=total)
    return total


def channel_probability(side, inp, params, phi=None):
    """Probability that both photons leave on ``side`` (equal fronts only)."""
    side = Side(side)
    if phi is None:
        phi = relative_wavefunction(side.channel, inp, params, warn=False)
    pref = (8 * math.pi ** 2 * N_RR * g2_norm(inp)) ** 2
    return pref * tail_integral(phi, 0.0, inp.epsilon, params.gamma) / (2 * inp.epsilon)


def _check_conditioning(phi, inp, params):
    bound = DEGENERACY_FACTOR * (inp.epsilon / params.gamma) ** 2
    peak = (abs(phi.a) + abs(phi.b)) ** 2
    if peak < bound:
        raise IllConditionedG2Error(
            f"max |phi|^2 <= {peak:.3g} is below {bound:.3g}: the pair amplitude is of the order of "
            "the neglected epsilon/gamma corrections, g2 is not meaningful here",
            estimate=peak,
        )


def _g2_reduced(req):
    inp, params = req.input, req.params
    if inp.l1 != inp.l2:
        raise ValueError("the reduced g2 form needs l1 == l2; use g2_direct")
    side = req.side
    phi = relative_wavefunction(side.channel, inp, params)
    _check_conditioning(phi, inp, params)
    eps = inp.epsilon
    x1, l1 = req.x1_ref, inp.l1
    taus = np.asarray(req.tau_grid)
    I0 = tail_integral(phi, 0.0, eps, params.gamma)
    # lower limits of the two marginal integrals for each tau
    if side is Side.transmission:
        lo1 = np.full_like(taus, x1 + l1)
        lo2 = x1 + l1 + taus
        growth = 4 * eps * (x1 + l1 + taus / 2)
    else:
        lo1 = np.full_like(taus, l1 - x1)
        lo2 = l1 - x1 - taus
        growth = -4 * eps * (x1 - l1 + taus / 2)
    cache = {}

    def I(lo):
        key = float(lo)
        if key not in cache:
            cache[key] = tail_integral(phi, key, eps, params.gamma)
        return cache[key]

    g2 = np.empty_like(taus)
    for n, tau in enumerate(taus):
        M = 4 * eps * math.exp(growth[n]) * I(lo1[n]) * I(lo2[n])
        if M <= 1e-12 * I0 * I0:
            raise IllConditionedG2Error(f"marginal product {M:.3g} too small at tau={tau}", estimate=M)
        g2[n] = I0 / M * abs(phi(tau)) ** 2
    meta = {"channel_probability": channel_probability(side, inp, params, phi), "x1": x1}
    return G2Curve(tau=taus, g2=g2, request=req, metadata=meta)


def g2_transmission(req):
    """g2(tau) of the transmitted pair from the reduced closed form.

    Raises:
        IllConditionedG2Error: when the transmitted pair amplitude is at the
            level of the neglected corrections (for example xi = 0, E = 0).
        EmptySupportError: when x1 or x1 + tau lies outside the packet.
    """
    if Side(req.side) is not Side.transmission:
        raise ValueError("request is not for the transmission side")
    return _g2_reduced(req)


def g2_reflection(req):
    """g2(tau) of the reflected pair from the reduced closed form."""
    if Side(req.side) is not Side.reflection:
        raise ValueError("request is not for the reflection side")
    return _g2_reduced(req)


def compute_g2(req):
    """Dispatch on ``req.side``."""
    return _g2_reduced(req)


class _DirectIntegrals:
    """Marginals of |psi|^2 by quadrature on the full two-photon wave function."""

    def __init__(self, side, inp, params):
        self.side = Side(side)
        self.inp = inp
        self.params = params
        self.channel = self.side.channel
        l1, l2 = inp.l1, inp.l2
        self.edges = sorted({-l1, -l2}) if self.side is Side.transmission else sorted({l1, l2})
        self._norm = None
        self._marginals = {}
        check_validity(inp, params)
        # constants of the co-moving wave function, so the scalar density
        # below avoids per-call array overhead inside nested quadrature
        TT, RR = _pair_amplitudes(inp, params)
        self._pair = complex(TT if self.side is Side.transmission else RR)
        self._corr = complex(RR * _correlated_ratio(inp, params))
        self._kb = complex(_bound_decay(inp, params))
        E, eps = inp.E_total, inp.epsilon
        self._envelope = 1j * (E - 2j * eps)
        self._common = complex(
            -4 * math.pi ** 2 * N_RR * g2_norm(inp)
            * cmath.exp(1j * (E / 2 - 1j * eps) * (l1 + l2))
            * cmath.exp(1j * inp.delta_rel * (l1 - l2))
        )

    def amplitude(self, x1, x2):
        """psi(x1, x2) in the co-moving frame (scalar arguments)."""
        l1, l2 = self.inp.l1, self.inp.l2
        xc = 0.5 * (x1 + x2)
        x = x1 - x2
        if self.side is Side.transmission:
            s, arg = -1.0, xc
        else:
            s, arg = 1.0, -xc
        u = s * xc
        # theta(0) = 1 throughout
        in_a = u + s * x / 2 - l1 >= 0 and u - s * x / 2 - l2 >= 0
        in_b = u - s * x / 2 - l1 >= 0 and u + s * x / 2 - l2 >= 0
        in_c = u - abs(x) / 2 - l1 >= 0
        if not (in_a or in_b or in_c):
            return 0j
        ph = cmath.exp(-1j * s * self.inp.delta_rel * x)
        phi = self._pair * ((ph if in_a else 0.0) + (1 / ph if in_b else 0.0))
        if in_c:
            phi -= self._corr * cmath.exp(1j * self._kb * abs(x))
        return self._common * cmath.exp(self._envelope * arg) * phi

    def density(self, x1, x2):
        return abs(self.amplitude(x1, x2)) ** 2

    def _intervals(self, extra):
        pts = sorted(set(self.edges) | set(extra))
        if self.side is Side.transmission:
            hi = max(self.edges)
            pts = [p for p in pts if p <= hi]
            return [(-np.inf, pts[0])] + list(zip(pts[:-1], pts[1:]))
        lo = min(self.edges)
        pts = [p for p in pts if p >= lo]
        return list(zip(pts[:-1], pts[1:])) + [(pts[-1], np.inf)]

    def marginal(self, x1):
        key = float(x1)
        if key not in self._marginals:
            self._marginals[key] = self._marginal(key)
        return self._marginals[key]

    def _marginal(self, x1):
        total = 0.0
        for a, b in self._intervals([x1]):
            if a == b:
                continue
            v, _ = integrate.quad(lambda x2: self.density(x1, x2), a, b, epsrel=1e-10, epsabs=0.0, limit=LIMIT)
            total += v
        return total

    def norm(self):
        if self._norm is None:
            total = 0.0
            for a, b in self._intervals([]):
                if a == b:
                    continue
                v, _ = integrate.quad(self._marginal, a, b, epsrel=1e-9, epsabs=0.0, limit=LIMIT)
                total += v
            self._norm = total
        return self._norm


def g2_direct(side, x1, tau, inp, params, _cache=None):
    """g2 from its definition by quadrature on the two-photon wave function.

    Evaluates ``|psi(x1, x1+tau)|^2 * N / (2 G1(x1) G1(x1+tau))`` with
    ``N`` the double integral of ``|psi|^2`` and ``G1`` its one-coordinate
    marginals.  Independent of the reduced closed form and valid for
    ``l1 != l2`` as well.
    """
    side = Side(side)
    check_support(side, x1, tau, inp)
    d = _cache if _cache is not None else _DirectIntegrals(side, inp, params)
    num = d.density(x1, x1 + tau) * d.norm()
    den = 2 * d.marginal(x1) * d.marginal(x1 + tau)
    if den <= 1e-12 * d.norm() ** 2:
        raise IllConditionedG2Error(f"marginal product {den:.3g} too small", estimate=den)
    return num / den


def g2_direct_curve(req):
    """g2_direct over every delay in a request, reusing the double integral."""
    cache = _DirectIntegrals(req.side, req.input, req.params)
    vals = np.array([g2_direct(req.side, req.x1_ref, t, req.input, req.params, _cache=cache) for t in req.tau_grid])
    return G2Curve(tau=np.asarray(req.tau_grid), g2=vals, request=req, metadata={"x1": req.x1_ref, "method": "direct"})
