"""Time-domain integration of the discretized amplitude equations.

The integrator is fourth-order Runge-Kutta in the interaction picture
(integrating-factor RK4): the free phases ``exp(-i delta t)`` are applied
exactly and only the atom-field coupling is stepped.  For the two-photon
problem the coupling enters the two-photon amplitude ``D`` as a symmetric
rank-2 term, so a full step costs one symmetric matrix product with three
right-hand sides plus one symmetric rank-8 update.  ``D`` is kept in its
upper triangle, which makes the symmetry ``D[p, q] == D[q, p]`` exact.
"""

from dataclasses import dataclass, field
import math
import warnings

import numpy as np
from scipy.linalg import blas

from ..errors import (
    IntegratorAccuracyError,
    PrematureExtractionError,
    ResolutionWarning,
    WindowTooNarrowError,
)
from ..scatter import beta0
from ..twophoton import d0
from .grid import KGrid

NORM_DRIFT_LIMIT = 1e-6
DEEXCITATION_LIMIT = 1e-3


@dataclass
class Trace:
    """Recorded single-excitation amplitudes ``B_k(t)`` at selected modes.

    ``values`` holds discrete amplitudes; ``continuum()`` divides by
    ``sqrt(spacing)`` to give the amplitude density.
    """

    times: np.ndarray
    modes: np.ndarray
    values: np.ndarray
    spacing: float

    def continuum(self):
        return self.values / math.sqrt(self.spacing)


@dataclass
class SingleState:
    """One excitation shared between the two atoms and the even modes."""

    alpha1: complex
    alpha2: complex
    beta: np.ndarray
    grid: KGrid
    t: float = 0.0
    trace: Trace = None
    raw_norm: float = field(default=None, repr=False)
    norm_drift: float = field(default=None, repr=False)

    def norm(self):
        return abs(self.alpha1) ** 2 + abs(self.alpha2) ** 2 + float(np.sum(np.abs(self.beta) ** 2))

    def excitation(self):
        return abs(self.alpha1) ** 2 + abs(self.alpha2) ** 2


@dataclass
class TwoState:
    """Two excitations: both atoms (A), one atom plus a photon (B, C), two photons (D).

    ``D`` is an M x M Fortran-ordered array of which only the upper
    triangle (diagonal included) is used.
    """

    A: complex
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray
    grid: KGrid
    t: float = 0.0
    trace: Trace = None
    initial_norm: float = field(default=None, repr=False)
    norm_drift: float = field(default=None, repr=False)

    def D_full(self):
        up = np.triu(self.D)
        return up + np.triu(up, 1).T

    def photon_norm(self):
        """Ordered-pair weight of D: off-diagonal pairs once, diagonal halved."""
        up = np.abs(np.triu(self.D)) ** 2
        return float(np.sum(up) - 0.5 * np.sum(np.diag(up)))

    def norm(self):
        return (
            abs(self.A) ** 2
            + float(np.sum(np.abs(self.B) ** 2) + np.sum(np.abs(self.C) ** 2))
            + self.photon_norm()
        )

    def excitation(self):
        return abs(self.A) ** 2 + float(np.sum(np.abs(self.B) ** 2) + np.sum(np.abs(self.C) ** 2))


def _check_coverage(grid, delta_c, epsilon):
    cov = grid.lorentzian_coverage(delta_c, epsilon)
    if cov < 0.99:
        raise WindowTooNarrowError(f"window +-{grid.delta_max} holds only {cov:.4f} of the Lorentzian weight")
    if cov < 0.999:
        warnings.warn(f"window holds {cov:.5f} of the Lorentzian weight (< 0.999)", ResolutionWarning, stacklevel=3)
    return cov


def discretize_single(pulse, grid):
    """Sample the Lorentzian packet on the grid and renormalize it to one.

    Raises:
        WindowTooNarrowError: when the window holds less than 99% of the
            spectral weight (a warning is issued below 99.9%).
    """
    _check_coverage(grid, pulse.delta_c, pulse.epsilon)
    beta = beta0(grid.deltas, pulse) * math.sqrt(grid.spacing)
    raw = float(np.sum(np.abs(beta) ** 2))
    return SingleState(0j, 0j, beta / math.sqrt(raw), grid, raw_norm=raw)


def discretize_two(inp, grid):
    """Sample the symmetrized two-photon packet on the grid.

    The samples are not renormalized: the discrete norm deviates from one
    by the sampling error of the packet, which is reported in
    ``initial_norm``.
    """
    for pulse in (inp.pulse1, inp.pulse2):
        _check_coverage(grid, pulse.delta_c, pulse.epsilon)
    k = grid.deltas
    D = np.asfortranarray(np.triu(d0(k[:, None], k[None, :], inp) * grid.spacing))
    M = grid.M
    state = TwoState(0j, np.zeros(M, complex), np.zeros(M, complex), D, grid)
    state.initial_norm = state.norm()
    return state


def _resolve_dt(grid, t0, t_end, dt):
    if t_end < t0:
        raise ValueError(f"t_end={t_end} precedes the state time {t0}")
    default = grid.default_dt()
    if dt is None:
        dt = default
    if dt <= 0:
        raise ValueError("dt must be positive")
    if dt > default * (1 + 1e-12):
        warnings.warn(
            f"dt={dt:g} exceeds 0.05/delta_max={default:g}; accuracy is not guaranteed",
            ResolutionWarning,
            stacklevel=3,
        )
    n = max(1, int(math.ceil((t_end - t0) / dt - 1e-9)))
    return n, (t_end - t0) / n


def _check_drift(before, after, label):
    drift = abs(after - before)
    if drift > NORM_DRIFT_LIMIT:
        raise IntegratorAccuracyError(f"{label}: norm drift {drift:.3g} exceeds {NORM_DRIFT_LIMIT:g}", estimate=drift)
    return drift


def evolve_single(state, params, t_end, dt=None, record=None):
    """Integrate the single-excitation equations from ``state.t`` to ``t_end``.

    Args:
        state: SingleState at time ``state.t``.
        params: SystemParams (gamma, xi unused).
        t_end: final time.
        dt: step; defaults to 0.05 / delta_max.  The step is shrunk slightly
            so that it divides the interval.
        record: optional mode indices whose beta(t) is stored in ``trace``.

    Raises:
        IntegratorAccuracyError: if the norm drifts by more than 1e-6.
    """
    grid = state.grid
    n, h = _resolve_dt(grid, state.t, t_end, dt)
    k = grid.deltas
    ge = grid.g_eff(params)
    t0 = state.t
    ph0 = np.exp(1j * k * t0)
    b = state.beta * ph0
    y = np.array([state.alpha1, state.alpha2], dtype=complex)
    norm0 = state.norm()

    idx = None if record is None else np.asarray(record, dtype=int)
    if idx is not None:
        times = t0 + h * np.arange(n + 1)
        vals = np.empty((n + 1, idx.size), complex)
        vals[0] = state.beta[idx]

    def rhs(t, y, b):
        a = ge * np.exp(1j * k * t)
        dy = -1j * (np.conj(a) @ b) * np.ones(2)
        db = -1j * a * (y[0] + y[1])
        return dy, db

    for step in range(n):
        t = t0 + step * h
        y1, b1 = rhs(t, y, b)
        y2, b2 = rhs(t + h / 2, y + h / 2 * y1, b + h / 2 * b1)
        y3, b3 = rhs(t + h / 2, y + h / 2 * y2, b + h / 2 * b2)
        y4, b4 = rhs(t + h, y + h * y3, b + h * b3)
        y = y + h / 6 * (y1 + 2 * y2 + 2 * y3 + y4)
        b = b + h / 6 * (b1 + 2 * b2 + 2 * b3 + b4)
        if idx is not None:
            vals[step + 1] = b[idx] * np.exp(-1j * k[idx] * (t0 + (step + 1) * h))

    out = SingleState(complex(y[0]), complex(y[1]), b * np.exp(-1j * k * t_end), grid, t_end)
    if idx is not None:
        out.trace = Trace(times, idx, vals, grid.spacing)
    out.norm_drift = _check_drift(norm0, out.norm(), "evolve_single")
    return out


def evolve_two(state, params, t_end, dt=None, record=None):
    """Integrate the two-excitation equations from ``state.t`` to ``t_end``.

    Same interface as ``evolve_single``; ``record`` selects modes whose
    ``B_k(t)`` is stored.  When B and C start equal they stay bitwise equal:
    their right-hand sides are computed once and shared.
    """
    grid = state.grid
    n, h = _resolve_dt(grid, state.t, t_end, dt)
    k = grid.deltas
    ge = grid.g_eff(params)
    xi = params.xi
    t0 = state.t
    M = grid.M

    norm0 = state.norm()
    a = state.A * np.exp(1j * xi * t0)
    ph = np.exp(1j * k * t0)
    b = state.B * ph
    c = state.C * ph
    d = np.asfortranarray(np.triu(state.D) * np.outer(ph, ph)) if t0 != 0 else np.array(state.D, order="F", copy=True)

    idx = None if record is None else np.asarray(record, dtype=int)
    if idx is not None:
        times = t0 + h * np.arange(n + 1)
        vals = np.empty((n + 1, idx.size), complex)
        vals[0] = state.B[idx]

    V = np.empty((M, 3), complex, order="F")
    left = np.empty((M, 4), complex, order="F")
    right = np.empty((M, 4), complex, order="F")
    alpha = -1j * h / 6
    for step in range(n):
        t = t0 + step * h
        a_t = ge * np.exp(1j * k * t)
        a_m = ge * np.exp(1j * k * (t + h / 2))
        a_e = ge * np.exp(1j * k * (t + h))
        v_t, v_m, v_e = np.conj(a_t), np.conj(a_m), np.conj(a_e)
        V[:, 0], V[:, 1], V[:, 2] = v_t, v_m, v_e
        S = blas.zsymm(1.0, d, V, side=0, lower=0)

        # stage 1
        u1 = b + c
        kA1 = -1j * np.exp(1j * xi * t) * (v_t @ u1)
        kB1 = -1j * (a_t * np.exp(-1j * xi * t) * a + S[:, 0])
        # stage 2: D advanced by h/2 along the stage-1 rank-2 term
        a2 = a + h / 2 * kA1
        b2 = b + h / 2 * kB1
        c2 = c + h / 2 * kB1
        u2 = b2 + c2
        s2 = S[:, 1] - 1j * h / 2 * ((v_m @ a_t) * u1 + (v_m @ u1) * a_t)
        kA2 = -1j * np.exp(1j * xi * (t + h / 2)) * (v_m @ u2)
        kB2 = -1j * (a_m * np.exp(-1j * xi * (t + h / 2)) * a2 + s2)
        # stage 3
        a3 = a + h / 2 * kA2
        b3 = b + h / 2 * kB2
        c3 = c + h / 2 * kB2
        u3 = b3 + c3
        s3 = S[:, 1] - 1j * h / 2 * ((v_m @ a_m) * u2 + (v_m @ u2) * a_m)
        kA3 = -1j * np.exp(1j * xi * (t + h / 2)) * (v_m @ u3)
        kB3 = -1j * (a_m * np.exp(-1j * xi * (t + h / 2)) * a3 + s3)
        # stage 4
        a4 = a + h * kA3
        b4 = b + h * kB3
        c4 = c + h * kB3
        u4 = b4 + c4
        s4 = S[:, 2] - 1j * h * ((v_e @ a_m) * u3 + (v_e @ u3) * a_m)
        kA4 = -1j * np.exp(1j * xi * (t + h)) * (v_e @ u4)
        kB4 = -1j * (a_e * np.exp(-1j * xi * (t + h)) * a4 + s4)

        a = a + h / 6 * (kA1 + 2 * kA2 + 2 * kA3 + kA4)
        kB = kB1 + 2 * kB2 + 2 * kB3 + kB4
        b = b + h / 6 * kB
        c = c + h / 6 * kB
        left[:, 0], left[:, 1], left[:, 2], left[:, 3] = a_t, a_m, a_m, a_e
        right[:, 0], right[:, 1], right[:, 2], right[:, 3] = u1, 2 * u2, 2 * u3, u4
        d = blas.zsyr2k(alpha, left, right, beta=1.0, c=d, lower=0, overwrite_c=1)
        if idx is not None:
            vals[step + 1] = b[idx] * np.exp(-1j * k[idx] * (t + h))

    ph = np.exp(-1j * k * t_end)
    D = np.asfortranarray(np.triu(d) * np.outer(ph, ph))
    out = TwoState(a * np.exp(-1j * xi * t_end), b * ph, c * ph, D, grid, t_end)
    out.initial_norm = state.initial_norm
    if idx is not None:
        out.trace = Trace(times, idx, vals, grid.spacing)
    out.norm_drift = _check_drift(norm0, out.norm(), "evolve_two")
    return out


def extract_longtime_single(state, check=True):
    """Discrete beta_k(t) with the free phase removed, comparable to tbar_k beta_k(0).

    ``check=False`` skips the de-excitation test (diagnostics only).

    Raises:
        PrematureExtractionError: if the atoms still hold more than 1e-3 of
            the excitation probability.
    """
    exc = state.excitation()
    if check and exc > DEEXCITATION_LIMIT:
        raise PrematureExtractionError(f"atomic excitation {exc:.3g} at t={state.t} is above {DEEXCITATION_LIMIT}")
    return state.beta * np.exp(1j * state.grid.deltas * state.t)


def extract_longtime_two(state, check=True):
    """Full symmetric D_pq(t) with free phases removed, in continuum normalization.

    Divides the discrete amplitudes by the grid spacing so the result is
    directly comparable with ``twophoton.longtime_d`` on the grid.
    """
    exc = state.excitation()
    if check and exc > DEEXCITATION_LIMIT:
        raise PrematureExtractionError(f"single-excitation weight {exc:.3g} at t={state.t} is above {DEEXCITATION_LIMIT}")
    ph = np.exp(1j * state.grid.deltas * state.t)
    return state.D_full() * np.outer(ph, ph) / state.grid.spacing


def relative_l2_error(approx, exact):
    """||approx - exact|| / ||exact|| over all entries."""
    approx = np.asarray(approx)
    exact = np.asarray(exact)
    return float(np.linalg.norm(approx - exact) / np.linalg.norm(exact))
