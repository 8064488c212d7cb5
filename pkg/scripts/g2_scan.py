"""Bunching/antibunching map at E = 4: sign of g2(0) - g2(1) over xi for both sides.

Usage: python3 scripts/g2_scan.py [E]
"""

import sys

import numpy as np

from rydberg_blockade.correlation import G2Request, compute_g2
from rydberg_blockade.scatter import SystemParams
from rydberg_blockade.twophoton import TwoPhotonInput


def scan(E=4.0, eps=0.01):
    inp = TwoPhotonInput.from_detunings(E, 0.0, eps, 0.0)
    print(f"{'xi':>6} {'g_r(0)':>10} {'g_r(1)':>10} {'g_l(0)':>10} {'g_l(1)':>10}")
    for xi in np.arange(0.25, 10.01, 0.25):
        row = []
        for side in ("transmission", "reflection"):
            g = compute_g2(G2Request(side, [0.0, 1.0], inp, SystemParams(xi=xi))).g2
            row += list(g)
        print(f"{xi:6.2f} " + " ".join(f"{v:10.4f}" for v in row))


if __name__ == "__main__":
    scan(float(sys.argv[1]) if len(sys.argv) > 1 else 4.0)
