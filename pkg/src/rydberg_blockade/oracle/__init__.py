"""Independent time-domain check of the closed-form scattering results."""

from .grid import KGrid
from .dynamics import (
    SingleState,
    TwoState,
    Trace,
    discretize_single,
    discretize_two,
    evolve_single,
    evolve_two,
    extract_longtime_single,
    extract_longtime_two,
    relative_l2_error,
)
from .laplace import laplace_Bk_closed, laplace_numeric
from .snapshot import read_snapshot, write_snapshot
from .checks import (
    CheckReport,
    LaplaceCheckConfig,
    SingleCheckConfig,
    TwoCheckConfig,
    laplace_check,
    single_photon_check,
    two_photon_check,
)

__all__ = [
    "KGrid",
    "SingleState",
    "TwoState",
    "Trace",
    "discretize_single",
    "discretize_two",
    "evolve_single",
    "evolve_two",
    "extract_longtime_single",
    "extract_longtime_two",
    "relative_l2_error",
    "laplace_Bk_closed",
    "laplace_numeric",
    "read_snapshot",
    "write_snapshot",
    "CheckReport",
    "LaplaceCheckConfig",
    "SingleCheckConfig",
    "TwoCheckConfig",
    "laplace_check",
    "single_photon_check",
    "two_photon_check",
]
