"""Convergence of the time-domain oracle against the closed forms.

Prints relative L2 errors for the single- and two-photon long-time
amplitudes over grid resolution and horizon, and the Laplace comparison
at a few grids.  Takes several minutes on one core.

Usage: python3 scripts/oracle_convergence.py [single|two|laplace ...]
"""

import sys
import time
import warnings

from rydberg_blockade.errors import ResolutionWarning
from rydberg_blockade.oracle.checks import (
    LaplaceCheckConfig,
    SingleCheckConfig,
    TwoCheckConfig,
    laplace_check,
    single_photon_check,
    two_photon_check,
)


def timed(fn, *args, **kw):
    t0 = time.perf_counter()
    r = fn(*args, **kw)
    return r, time.perf_counter() - t0


def single():
    print("single photon, eps=0.1, l=10")
    for M, window in ((1001, 40.0), (2001, 40.0), (4001, 80.0)):
        for t_end in (60.0, 90.0):
            r, dt = timed(single_photon_check, SingleCheckConfig(M=M, window=window, t_end=t_end))
            print(f"  M={M:5d} window={window:5.1f} t_end={t_end:5.1f}  error={r.error:.4f}  "
                  f"raw_norm={r.meta['raw_norm']:.5f}  ({dt:.1f}s)")


def two():
    print("two photons, eps=0.1, l1=l2=10, default horizon")
    for M, window in ((201, 20.0), (301, 20.0), (401, 20.0)):
        r, dt = timed(two_photon_check, TwoCheckConfig(M=M, window=window, xis=(0.0, 2.0, 10.0)), strict=False)
        errs = "  ".join(f"{label}: {e:.4f}" for label, e in r.rows)
        print(f"  M={M:4d} window={window:4.1f} t_end={r.meta['t_end']:5.1f}  {errs}  ({dt:.1f}s)")


def laplace():
    print("Laplace transform of B_k, eps=0.1, xi=1, l1=l2=5")
    for M, window in ((801, 20.0), (1101, 27.5)):
        r, dt = timed(laplace_check, LaplaceCheckConfig(M=M, window=window))
        print(f"  M={M:5d} window={window:5.1f}  worst error={r.error:.4f}  ({dt:.1f}s)")


if __name__ == "__main__":
    warnings.simplefilter("ignore", ResolutionWarning)
    chosen = sys.argv[1:] or ["single", "two", "laplace"]
    for name in chosen:
        {"single": single, "two": two, "laplace": laplace}[name]()
