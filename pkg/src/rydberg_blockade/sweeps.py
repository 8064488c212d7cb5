"""Parameter sweeps behind the figure data and spectra.

A sweep evaluates one quantity over a two-axis grid.  Axes are named, so
the same request with the axes swapped yields the transposed matrix.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
import os
import warnings

import numpy as np

from .correlation import G2Request, Side, compute_g2
from .errors import IllConditionedG2Error, ParameterError, ValidityWarning
from .scatter import SystemParams, reflection, tbar, transmission
from .twophoton import VALIDITY_RATIO, TwoPhotonInput, relative_wavefunction

QUANTITIES = ("phi_rr", "phi_ll", "g2_r", "g2_l", "single_spectrum")
# axis names each quantity needs (the interaction axis is always "xi")
_AXES = {
    "phi_rr": {"xi", "x"},
    "phi_ll": {"xi", "x"},
    "g2_r": {"xi", "tau"},
    "g2_l": {"xi", "tau"},
    "single_spectrum": {"delta"},
}


@dataclass(frozen=True)
class Axis:
    """Named sample points along one sweep direction."""

    name: str
    values: tuple

    def __post_init__(self):
        vals = tuple(float(v) for v in np.atleast_1d(self.values))
        if not vals:
            raise ParameterError(f"axis {self.name!r} is empty")
        object.__setattr__(self, "values", vals)

    @classmethod
    def linspace(cls, name, lo, hi, n):
        """``n >= 2`` evenly spaced points on ``[lo, hi]`` with ``lo < hi``."""
        if not int(n) >= 2:
            raise ParameterError(f"axis {name!r}: need at least 2 points, got {n}")
        if not hi > lo:
            raise ParameterError(f"axis {name!r}: empty range [{lo}, {hi}]")
        return cls(name, tuple(np.linspace(lo, hi, int(n))))

    @property
    def array(self):
        return np.asarray(self.values)


@dataclass(frozen=True)
class SweepConfig:
    """A quantity over one or two axes with the remaining parameters fixed.

    Attributes:
        quantity: one of ``QUANTITIES``.
        axis1, axis2: the sweep axes; ``axis2`` is None for spectra.
        E, delta_rel, epsilon, l1, l2, gamma: fixed parameters.
        allow_wide_packets: accept ``epsilon`` outside the narrow-band
            guard band ``gamma / epsilon >= 20``.
    """

    quantity: str
    axis1: Axis
    axis2: Axis = None
    E: float = 0.0
    delta_rel: float = 0.0
    epsilon: float = 0.01
    l1: float = 0.0
    l2: float = None
    gamma: float = 1.0
    allow_wide_packets: bool = False

    def __post_init__(self):
        if self.quantity not in QUANTITIES:
            raise ParameterError(f"unknown quantity {self.quantity!r}; expected one of {QUANTITIES}")
        names = {a.name for a in (self.axis1, self.axis2) if a is not None}
        if self.axis1 is not None and self.axis2 is not None and self.axis1.name == self.axis2.name:
            raise ParameterError("the two axes must differ")
        if names != _AXES[self.quantity]:
            raise ParameterError(f"{self.quantity} needs axes {sorted(_AXES[self.quantity])}, got {sorted(names)}")
        if not self.epsilon > 0 or not self.gamma > 0:
            raise ParameterError("epsilon and gamma must be positive")
        if self.quantity != "single_spectrum" and not self.allow_wide_packets:
            if self.gamma < VALIDITY_RATIO * self.epsilon:
                raise ParameterError(
                    f"epsilon/gamma = {self.epsilon / self.gamma:g} is outside the narrow-band guard band "
                    f"(<= {1 / VALIDITY_RATIO:g}); pass the override to proceed"
                )

    def axis(self, name):
        for a in (self.axis1, self.axis2):
            if a is not None and a.name == name:
                return a
        raise KeyError(name)

    def two_photon_input(self):
        return TwoPhotonInput.from_detunings(self.E, self.delta_rel, self.epsilon, self.l1, self.l2)


@dataclass
class SweepResult:
    """Values over the sweep grid, ``values[i, j]`` at ``(axis1[i], axis2[j])``."""

    config: SweepConfig
    values: np.ndarray
    columns: dict = field(default_factory=dict)


def _xi_row(args):
    """One interaction strength against the whole second axis."""
    cfg, xi = args
    params = SystemParams(cfg.gamma, xi)
    inp = cfg.two_photon_input()
    with warnings.catch_warnings():
        # the guard band was checked at configuration time
        warnings.simplefilter("ignore", ValidityWarning)
        if cfg.quantity in ("phi_rr", "phi_ll"):
            phi = relative_wavefunction(cfg.quantity[-2:], inp, params, warn=False)
            return phi.abs2(cfg.axis("x").array)
        side = Side.transmission if cfg.quantity == "g2_r" else Side.reflection
        try:
            return compute_g2(G2Request(side, cfg.axis("tau").values, inp, params)).g2
        except IllConditionedG2Error:
            return np.full(len(cfg.axis("tau").values), np.nan)


def default_jobs():
    return os.cpu_count() or 1


def run_sweep(cfg, jobs=None):
    """Evaluate ``cfg``.

    Rows over the interaction axis are independent and are spread over a
    process pool of ``jobs`` workers (default: available cores); results
    are assembled in order, so output does not depend on ``jobs``.
    Ill-conditioned g2 points (transmission at vanishing pair amplitude)
    are NaN.
    """
    if cfg.quantity == "single_spectrum":
        d = cfg.axis1.array
        params = SystemParams(cfg.gamma, 0.0)
        tb = tbar(d, params)
        cols = {
            "T_abs2": np.abs(transmission(d, params)) ** 2,
            "R_abs2": np.abs(reflection(d, params)) ** 2,
            "tbar_arg": np.angle(tb),
            "tbar_re": tb.real,
            "tbar_im": tb.imag,
        }
        return SweepResult(cfg, cols["R_abs2"][:, None], cols)
    xis = cfg.axis("xi").values
    jobs = default_jobs() if jobs is None else int(jobs)
    tasks = [(cfg, xi) for xi in xis]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_xi_row, tasks))
    else:
        rows = [_xi_row(t) for t in tasks]
    mat = np.vstack(rows)
    if cfg.axis1.name != "xi":
        mat = mat.T
    return SweepResult(cfg, mat)


# figure presets: quantity and total detuning per (figure, variant)
FIGURES = {
    "fig2": {"a": ("phi_rr", 0.0, "surface"), "b": ("phi_rr", 4.0, "surface"),
             "c": ("phi_rr", 0.0, "cuts"), "d": ("phi_rr", 4.0, "cuts")},
    "fig3": {"a": ("phi_ll", 0.0, "surface"), "b": ("phi_ll", 4.0, "surface"),
             "c": ("phi_ll", 0.0, "cuts"), "d": ("phi_ll", 4.0, "cuts")},
    "fig4": {"a": ("g2_r", 0.0, "surface"), "b": ("g2_r", 4.0, "surface"),
             "c": ("g2_l", 0.0, "surface"), "d": ("g2_l", 4.0, "surface")},
}
FIGURE_EPSILON = 0.01
XI_RANGE = (0.0, 20.0, 201)
X_RANGE = (-6.0, 6.0, 401)
TAU_RANGE = (0.0, 5.0, 51)
CUT_XI = (0.0, 1.0, 2.0, 4.0, 10.0, 20.0)


def figure_config(fig, variant, **overrides):
    """SweepConfig for a figure panel.

    Keyword overrides: ``E``, ``delta_rel``, ``epsilon``, ``l1``, ``l2``,
    ``gamma``, ``xi_range`` (lo, hi, n), ``x_range``, ``tau_range``,
    ``xi_values`` (explicit interaction strengths, the line-cut list for
    panels c/d of fig2 and fig3), ``allow_wide_packets``, ``swap_axes``.

    Returns:
        (SweepConfig, kind) with kind "surface" or "cuts".
    """
    try:
        quantity, E, kind = FIGURES[fig][variant]
    except KeyError:
        raise ParameterError(f"unknown figure panel {fig}{variant}") from None
    ov = {k: v for k, v in overrides.items() if v is not None}
    if "xi_values" in ov:
        xi_axis = Axis("xi", tuple(ov.pop("xi_values")))
    elif kind == "cuts":
        xi_axis = Axis("xi", CUT_XI)
    else:
        xi_axis = Axis.linspace("xi", *ov.pop("xi_range", XI_RANGE))
    ov.pop("xi_range", None)
    if quantity.startswith("phi"):
        other = Axis.linspace("x", *ov.pop("x_range", X_RANGE))
    else:
        other = Axis.linspace("tau", *ov.pop("tau_range", TAU_RANGE))
    ov.pop("x_range", None)
    ov.pop("tau_range", None)
    swap = ov.pop("swap_axes", False)
    axes = (other, xi_axis) if swap else (xi_axis, other)
    params = {"E": E, "epsilon": FIGURE_EPSILON}
    params.update(ov)
    return SweepConfig(quantity, *axes, **params), kind


def spectrum_config(lo=-10.0, hi=10.0, n=1001, gamma=1.0):
    return SweepConfig("single_spectrum", Axis.linspace("delta", lo, hi, n), gamma=gamma)


def with_axes(cfg, axis1, axis2):
    return replace(cfg, axis1=axis1, axis2=axis2)
