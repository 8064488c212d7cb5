"""Plain-text snapshots of oracle states.

Layout: ``# key=value`` header lines, a ``# columns=...`` line, then one
comma-separated row per amplitude.  Two-photon states store the upper
triangle of D.
"""


import numpy as np

from .dynamics import SingleState, TwoState
from .grid import KGrid

FORMAT = "rydberg-blockade-snapshot/1"


def _fmt(x):
    return repr(float(x))


def write_snapshot(path, state, meta=None):
    """Write ``state`` (SingleState or TwoState) with optional extra metadata."""
    grid = state.grid
    head = {"format": FORMAT, "M": grid.M, "delta_max": _fmt(grid.delta_max), "t": _fmt(state.t)}
    if isinstance(state, SingleState):
        head["kind"] = "single"
        for name in ("alpha1", "alpha2"):
            v = complex(getattr(state, name))
            head[f"{name}_re"], head[f"{name}_im"] = _fmt(v.real), _fmt(v.imag)
        cols = "index,delta,re,im"
        k = grid.deltas
        rows = (f"{j},{_fmt(k[j])},{_fmt(z.real)},{_fmt(z.imag)}" for j, z in enumerate(state.beta))
    elif isinstance(state, TwoState):
        head["kind"] = "two"
        v = complex(state.A)
        head["A_re"], head["A_im"] = _fmt(v.real), _fmt(v.imag)
        cols = "p,q,re,im"
        p, q = np.triu_indices(grid.M)
        vals = state.D[p, q]
        lines = [f"B,{j},{_fmt(z.real)},{_fmt(z.imag)}" for j, z in enumerate(state.B)]
        lines += [f"C,{j},{_fmt(z.real)},{_fmt(z.imag)}" for j, z in enumerate(state.C)]
        head["single_rows"] = "B,C"
        rows = lines + [f"{a},{b},{_fmt(z.real)},{_fmt(z.imag)}" for a, b, z in zip(p, q, vals)]
    else:
        raise TypeError(f"cannot snapshot {type(state).__name__}")
    for key, val in (meta or {}).items():
        head[str(key)] = val
    with open(path, "w", encoding="utf-8") as fh:
        for key, val in head.items():
            fh.write(f"# {key}={val}\n")
        fh.write(f"# columns={cols}\n")
        for row in rows:
            fh.write(row + "\n")


def read_snapshot(path):
    """Read a snapshot back.

    Returns:
        (state, meta): the reconstructed state and the header dictionary.
    """
    meta, body = {}, []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("# "):
                key, _, val = line[2:].partition("=")
                meta[key] = val
            elif line:
                body.append(line.split(","))
    if meta.get("format") != FORMAT:
        raise ValueError(f"{path}: not a snapshot file")
    grid = KGrid(float(meta["delta_max"]), int(meta["M"]))
    t = float(meta["t"])
    if meta["kind"] == "single":
        beta = np.array([complex(float(r[2]), float(r[3])) for r in body])
        a1 = complex(float(meta["alpha1_re"]), float(meta["alpha1_im"]))
        a2 = complex(float(meta["alpha2_re"]), float(meta["alpha2_im"]))
        return SingleState(a1, a2, beta, grid, t), meta
    M = grid.M
    B = np.zeros(M, complex)
    C = np.zeros(M, complex)
    D = np.zeros((M, M), complex, order="F")
    for r in body:
        z = complex(float(r[2]), float(r[3]))
        if r[0] == "B":
            B[int(r[1])] = z
        elif r[0] == "C":
            C[int(r[1])] = z
        else:
            D[int(r[0]), int(r[1])] = z
    A = complex(float(meta["A_re"]), float(meta["A_im"]))
    return TwoState(A, B, C, D, grid, t), meta
