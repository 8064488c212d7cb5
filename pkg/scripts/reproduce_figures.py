"""Write the data and SVG plots behind every figure panel into an output directory.

Usage: python3 scripts/reproduce_figures.py [outdir]
"""

import pathlib
import sys

from rydberg_blockade.cli import main


def run(outdir):
    out = pathlib.Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    status = main(["spectrum", "--out", str(out / "spectrum.csv"), "--svg", str(out / "spectrum.svg")])
    for fig in ("fig2", "fig3", "fig4"):
        for variant in "abcd":
            stem = out / f"{fig}{variant}"
            code = main(["figure", fig, variant, "--out", f"{stem}.csv", "--svg", f"{stem}.svg"])
            print(f"{fig}{variant}: exit {code}")
            status = max(status, code)
    return status


if __name__ == "__main__":
    sys.exit(run(sys.argv[1] if len(sys.argv) > 1 else "figures"))
