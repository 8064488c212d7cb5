"""Command-line front end.

Subcommands ``spectrum``, ``figure``, ``g2`` and ``oracle-check``.  Every
setting can come from a flag, from a ``--config`` file (``key = value``
per line, ``#`` comments) or from the built-in defaults, in that order of
precedence.  Exit codes: 0 success, 2 configuration error, 3 numerical
failure, 4 oracle check failed, 5 I/O error.
"""

import argparse
import csv
import io
import math
import sys
import warnings

import numpy as np

from . import __version__
from .correlation import G2Request, Side, compute_g2, g2_direct_curve
from .errors import BlockadeError, EmptySupportError, NumericalError, ParameterError
from .oracle import checks
from .scatter import SystemParams
from .svg import heatmap, lineplot
from .sweeps import figure_config, run_sweep, spectrum_config
from .twophoton import TwoPhotonInput

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL, EXIT_ORACLE, EXIT_IO = 0, 2, 3, 4, 5
TOOL = "rydberg-blockade"


class ConfigError(Exception):
    pass


def _bool(text):
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _floats(text):
    if isinstance(text, (list, tuple)):
        return tuple(float(v) for v in text)
    return tuple(float(v) for v in str(text).replace(" ", "").split(",") if v)


def _range(text):
    vals = _floats(text)
    if len(vals) != 3:
        raise ValueError(f"range needs lo,hi,n, got {text!r}")
    n = vals[2]
    if n != int(n):
        raise ValueError(f"point count must be an integer, got {n}")
    return (vals[0], vals[1], int(n))


# every setting with its parser; flags and config keys share these names
SETTINGS = {
    "epsilon": float, "xi": float, "E": float, "delta_rel": float, "l1": float, "l2": float,
    "gamma": float, "gamma_units": _bool, "out": str, "svg": str, "jobs": int,
    "delta_min": float, "delta_max": float, "points": int,
    "xi_values": _floats, "xi_range": _range, "x_range": _range, "tau_range": _range,
    "swap_axes": _bool, "allow_wide_packets": _bool,
    "side": str, "tau_max": float, "tau_points": int, "x1": float, "direct": _bool,
    "grid": int, "window": float, "dt": float, "t_end": float, "snapshot": str, "relaxed": _bool,
}
# settings that do not change the numbers and stay out of the CSV header
_UNRECORDED = {"out", "svg", "jobs", "snapshot"}

DEFAULTS = {
    "common": {"gamma": 1.0, "gamma_units": True, "out": "-", "svg": None, "jobs": None},
    "spectrum": {"delta_min": -10.0, "delta_max": 10.0, "points": 1001},
    "figure": {"swap_axes": False, "allow_wide_packets": False},
    "g2": {"side": "reflection", "E": 0.0, "xi": 2.0, "delta_rel": 0.0, "epsilon": 0.01, "l1": 0.0,
           "tau_max": 5.0, "tau_points": 11, "direct": False},
    "oracle-check": {"relaxed": False},
}


def read_config(path):
    """Parse a ``key = value`` file into typed settings."""
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for n, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, val = line.partition("=")
        key = key.strip().replace("-", "_")
        if not sep or key not in SETTINGS:
            raise ConfigError(f"{path}:{n}: unknown or malformed setting {line!r}")
        try:
            out[key] = SETTINGS[key](val.strip())
        except ValueError as exc:
            raise ConfigError(f"{path}:{n}: bad value for {key}: {exc}") from exc
    return out


def _resolve(command, args):
    settings = dict(DEFAULTS["common"])
    settings.update(DEFAULTS.get(command, {}))
    if args.config:
        settings.update(read_config(args.config))
    for key in SETTINGS:
        val = getattr(args, key, None)
        if val is not None:
            settings[key] = val
    if settings["gamma_units"] and settings["gamma"] != 1.0:
        raise ConfigError("--gamma needs --no-gamma-units (with gamma units on, every input is a ratio to gamma)")
    return settings


def _num(v):
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    v = float(v)
    return "nan" if math.isnan(v) else repr(v)


def _header(command, settings, extra=()):
    lines = [f"tool={TOOL}", f"version={__version__}", f"command={command}"]
    for key in sorted(settings):
        if key in _UNRECORDED or settings[key] is None:
            continue
        val = settings[key]
        if isinstance(val, tuple):
            val = ",".join(_num(v) for v in val)
        elif isinstance(val, (float, int)) and not isinstance(val, bool):
            val = _num(val)
        lines.append(f"{key}={val}")
    lines.extend(extra)
    return lines


def _emit(path, header, columns, rows):
    buf = io.StringIO()
    for line in header:
        buf.write(f"# {line}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_num(v) if isinstance(v, (float, np.floating, int, np.integer)) else v for v in row])
    _write_text(path, buf.getvalue())


def _write_text(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


def _axis_line(name, axis):
    v = axis.values
    return f"axis.{name}={axis.name}[{len(v)}] {_num(v[0])}..{_num(v[-1])}"


def cmd_spectrum(settings):
    cfg = spectrum_config(settings["delta_min"], settings["delta_max"], settings["points"], settings["gamma"])
    res = run_sweep(cfg)
    d = cfg.axis1.array
    cols = ["delta", "T_abs2", "R_abs2", "tbar_arg", "tbar_re", "tbar_im"]
    rows = zip(d, *(res.columns[c] for c in cols[1:]))
    _emit(settings["out"], _header("spectrum", settings, [_axis_line(1, cfg.axis1)]), cols, rows)
    if settings["svg"]:
        svg = lineplot(d, {"|T|^2": res.columns["T_abs2"], "|R|^2": res.columns["R_abs2"]},
                       title="single-photon spectrum", xlabel="detuning / gamma", ylabel="probability")
        _write_text(settings["svg"], svg)
    return EXIT_OK


def cmd_figure(settings, fig, variant):
    keys = ("E", "delta_rel", "epsilon", "l1", "l2", "gamma", "xi_values", "xi_range", "x_range", "tau_range",
            "allow_wide_packets", "swap_axes")
    cfg, kind = figure_config(fig, variant, **{k: settings.get(k) for k in keys})
    res = run_sweep(cfg, jobs=settings["jobs"])
    a1, a2 = cfg.axis1, cfg.axis2
    value = {"phi_rr": "phi_rr_abs2", "phi_ll": "phi_ll_abs2", "g2_r": "g2_r", "g2_l": "g2_l"}[cfg.quantity]
    extra = [f"figure={fig}{variant}", f"kind={kind}", f"quantity={cfg.quantity}",
             f"E_used={_num(cfg.E)}", f"epsilon_used={_num(cfg.epsilon)}",
             _axis_line(1, a1), _axis_line(2, a2)]
    rows = ((x, y, res.values[i, j]) for i, x in enumerate(a1.values) for j, y in enumerate(a2.values))
    _emit(settings["out"], _header("figure", settings, extra), [a1.name, a2.name, value], rows)
    if settings["svg"]:
        title = f"{fig}({variant}): {value}, E/gamma={cfg.E:g}"
        if kind == "cuts":
            xi_ax = cfg.axis("xi")
            other = a2 if a1.name == "xi" else a1
            mat = res.values if a1.name == "xi" else res.values.T
            series = {f"xi={xi:g}": mat[i] for i, xi in enumerate(xi_ax.values)}
            svg = lineplot(other.array, series, title=title, xlabel=other.name, ylabel=value)
        else:
            svg = heatmap(a1.array, a2.array, res.values, title=title, xlabel=a1.name, ylabel=a2.name, zlabel=value)
        _write_text(settings["svg"], svg)
    return EXIT_OK


def cmd_g2(settings):
    try:
        side = Side(settings["side"])
    except ValueError:
        raise ConfigError(f"side must be 'transmission' or 'reflection', got {settings['side']!r}") from None
    inp = TwoPhotonInput.from_detunings(settings["E"], settings["delta_rel"], settings["epsilon"],
                                        settings["l1"], settings.get("l2"))
    params = SystemParams(settings["gamma"], settings["xi"])
    taus = np.linspace(0.0, settings["tau_max"], settings["tau_points"])
    req = G2Request(side, taus, inp, params, settings.get("x1"))
    if settings["direct"] or inp.l1 != inp.l2:
        curve = g2_direct_curve(req)
    else:
        curve = compute_g2(req)
    extra = [f"x1_used={_num(req.x1_ref)}", f"method={'direct' if settings['direct'] else 'reduced'}"]
    if "channel_probability" in curve.metadata:
        extra.append(f"channel_probability={_num(curve.metadata['channel_probability'])}")
    _emit(settings["out"], _header("g2", settings, extra), ["tau", "g2"], zip(curve.tau, curve.g2))
    if settings["svg"]:
        svg = lineplot(curve.tau, {f"g2 {side.value}": curve.g2}, title=f"g2, xi/gamma={settings['xi']:g}",
                       xlabel="tau", ylabel="g2")
        _write_text(settings["svg"], svg)
    return EXIT_OK


def _check_config(scenario, settings):
    over = {}
    for key, field in (("epsilon", "epsilon"), ("grid", "M"), ("window", "window"), ("dt", "dt"),
                       ("t_end", "t_end"), ("gamma", "gamma")):
        if settings.get(key) is not None:
            over[field] = settings[key]
    if scenario == "single":
        if settings.get("E") is not None:
            over["delta_c"] = settings["E"]
        if settings.get("l1") is not None:
            over["l"] = settings["l1"]
        return checks.SingleCheckConfig(**over)
    for key in ("E", "delta_rel", "l1", "l2"):
        if settings.get(key) is not None:
            over[key] = settings[key]
    if scenario == "two":
        if settings.get("xi_values") is not None:
            over["xis"] = tuple(settings["xi_values"])
        elif settings.get("xi") is not None:
            over["xis"] = (settings["xi"],)
        return checks.TwoCheckConfig(**over)
    if settings.get("xi") is not None:
        over["xi"] = settings["xi"]
    return checks.LaplaceCheckConfig(**over)


def cmd_oracle_check(settings, scenario):
    cfg = _check_config(scenario, settings)
    snap = settings.get("snapshot")
    if scenario == "single":
        report = checks.single_photon_check(cfg, snapshot=snap)
    elif scenario == "two":
        report = checks.two_photon_check(cfg, strict=not settings["relaxed"], snapshot=snap)
    else:
        report = checks.laplace_check(cfg)
    status = "PASS" if report.passed else "FAIL"
    extra = [f"scenario={scenario}", f"status={status}", f"worst_error={_num(report.error)}",
             f"tolerance={_num(report.tolerance)}"]
    for key in sorted(report.meta):
        val = report.meta[key]
        if isinstance(val, dict):
            val = ";".join(f"{k}:{_num(v)}" for k, v in sorted(val.items()))
        elif isinstance(val, (float, np.floating, int, np.integer)):
            val = _num(val)
        extra.append(f"meta.{key}={val}")
    rows = ((label, err, report.tolerance, "PASS" if err < report.tolerance else "FAIL") for label, err in report.rows)
    _emit(settings["out"], _header("oracle-check", settings, extra), ["case", "relative_error", "tolerance", "status"], rows)
    print(f"oracle-check {scenario}: {status} (worst relative error {report.error:.4g}, tolerance {report.tolerance:g})",
          file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_ORACLE


def _add_common(p):
    p.add_argument("--config", help="file of key = value settings (flags override it)")
    p.add_argument("--out", help="output CSV path (default: standard output)")
    p.add_argument("--svg", help="also write an SVG plot to this path")
    p.add_argument("--gamma-units", dest="gamma_units", action=argparse.BooleanOptionalAction, default=None,
                   help="inputs are ratios to gamma (default on); turn off to give --gamma explicitly")
    p.add_argument("--gamma", type=float, help="decay rate when --no-gamma-units is given")
    p.add_argument("--epsilon", type=float, help="packet width epsilon")
    p.add_argument("--xi", type=float, help="Rydberg interaction xi")
    p.add_argument("--E", type=float, help="total detuning E = delta1 + delta2")
    p.add_argument("--delta-rel", dest="delta_rel", type=float, help="relative detuning (delta1 - delta2)/2")
    p.add_argument("--l1", type=float, help="front position of the first photon")
    p.add_argument("--l2", type=float, help="front position of the second photon (default l1)")
    p.add_argument("--jobs", type=int, help="worker processes for sweeps (default: available cores)")


def build_parser():
    parser = argparse.ArgumentParser(prog=TOOL, description="Two-photon scattering on a pair of Rydberg atoms.")
    parser.add_argument("--version", action="version", version=f"{TOOL} {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="single-photon |T|^2, |R|^2 and scattering phase")
    _add_common(p)
    p.add_argument("--delta-min", dest="delta_min", type=float)
    p.add_argument("--delta-max", dest="delta_max", type=float)
    p.add_argument("--points", type=int)

    p = sub.add_parser("figure", help="data behind a figure panel")
    p.add_argument("fig", choices=["fig2", "fig3", "fig4"])
    p.add_argument("variant", choices=list("abcd"))
    _add_common(p)
    p.add_argument("--xi-values", dest="xi_values", type=_floats, help="explicit xi list, e.g. 0,2,4")
    p.add_argument("--xi-range", dest="xi_range", type=_range, help="lo,hi,n")
    p.add_argument("--x-range", dest="x_range", type=_range, help="lo,hi,n")
    p.add_argument("--tau-range", dest="tau_range", type=_range, help="lo,hi,n")
    p.add_argument("--swap-axes", dest="swap_axes", action="store_true", default=None)
    p.add_argument("--allow-wide-packets", dest="allow_wide_packets", action="store_true", default=None,
                   help="accept epsilon/gamma above 1/20")

    p = sub.add_parser("g2", help="second-order correlation curve")
    _add_common(p)
    p.add_argument("--side", choices=["transmission", "reflection"])
    p.add_argument("--tau-max", dest="tau_max", type=float)
    p.add_argument("--tau-points", dest="tau_points", type=int)
    p.add_argument("--x1", type=float, help="first detection point in the co-moving frame")
    p.add_argument("--direct", action="store_true", default=None, help="evaluate g2 from its definition")

    p = sub.add_parser("oracle-check", help="compare the time-domain oracle with the closed forms")
    p.add_argument("scenario", choices=["single", "two", "laplace"])
    _add_common(p)
    p.add_argument("--grid", type=int, help="number of modes M (odd)")
    p.add_argument("--window", type=float, help="half-width of the detuning window")
    p.add_argument("--dt", type=float, help="time step")
    p.add_argument("--t-end", dest="t_end", type=float, help="evolution horizon")
    p.add_argument("--xi-values", dest="xi_values", type=_floats, help="xi list for the two-photon scenario")
    p.add_argument("--snapshot", help="write final oracle states (path, or prefix for two-photon)")
    p.add_argument("--relaxed", action="store_true", default=None,
                   help="report instead of raising when the atoms are still excited at t_end")
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code not in (0, None) else EXIT_OK
    try:
        settings = _resolve(args.command, args)
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            if args.command == "spectrum":
                return cmd_spectrum(settings)
            if args.command == "figure":
                return cmd_figure(settings, args.fig, args.variant)
            if args.command == "g2":
                return cmd_g2(settings)
            return cmd_oracle_check(settings, args.scenario)
    except (ConfigError, ParameterError, EmptySupportError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical failure ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (BlockadeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
