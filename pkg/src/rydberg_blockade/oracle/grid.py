"""Uniform discretization of the even-mode detuning continuum."""

from dataclasses import dataclass
import math

import numpy as np

from ..errors import ParameterError


@dataclass(frozen=True)
class KGrid:
    """Symmetric uniform detuning grid.

    A continuum amplitude ``f(delta)`` is carried as the discrete amplitude
    ``f(delta_j) * sqrt(spacing)`` and each mode couples with
    ``g_eff = g * sqrt(spacing)``, so sums over modes reproduce the
    detuning integrals.

    Attributes:
        delta_max: half-width of the window; modes span [-delta_max, delta_max].
        M: number of modes, odd so that delta = 0 is a grid point.
    """

    delta_max: float = 40.0
    M: int = 2001

    def __post_init__(self):
        if not (isinstance(self.M, (int, np.integer)) and self.M >= 3 and self.M % 2 == 1):
            raise ParameterError(f"M must be an odd integer >= 3, got {self.M}")
        if not self.delta_max > 0:
            raise ParameterError("delta_max must be positive")

    @property
    def delta_min(self):
        return -self.delta_max

    @property
    def spacing(self):
        return 2 * self.delta_max / (self.M - 1)

    @property
    def deltas(self):
        j = np.arange(self.M) - (self.M - 1) // 2
        return j * self.spacing

    @property
    def recurrence_time(self):
        """Period of free evolution on the grid, 2 pi / spacing."""
        return 2 * math.pi / self.spacing

    def g_eff(self, params):
        """Per-mode coupling g * sqrt(spacing)."""
        return params.g * math.sqrt(self.spacing)

    def default_dt(self):
        """Time step 0.05 / delta_max."""
        return 0.05 / self.delta_max

    def lorentzian_coverage(self, delta_c, epsilon):
        """Fraction of a normalized Lorentzian's weight inside the window."""
        hi = math.atan((self.delta_max - delta_c) / epsilon)
        lo = math.atan((self.delta_min - delta_c) / epsilon)
        return (hi - lo) / math.pi
