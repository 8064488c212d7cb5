import csv
import xml.dom.minidom

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rydberg_blockade import svg
from rydberg_blockade.cli import main, read_config
from rydberg_blockade.errors import ParameterError
from rydberg_blockade.sweeps import Axis, SweepConfig, figure_config, run_sweep


def run(tmp_path, *argv, name="out.csv"):
    out = tmp_path / name
    code = main([*argv, "--out", str(out)])
    return code, out


def load(path):
    lines = path.read_text().splitlines()
    header = dict(l[2:].split("=", 1) for l in lines if l.startswith("# "))
    rows = list(csv.reader(l for l in lines if not l.startswith("#")))
    cols = rows[0]
    data = np.array([[float(v) for v in r] for r in rows[1:]]) if rows[1:] and cols[0] != "case" else rows[1:]
    return header, cols, data


def test_spectrum_rows(tmp_path):
    code, out = run(tmp_path, "spectrum", "--points", "1001")
    assert code == 0
    header, cols, data = load(out)
    assert header["version"] and header["points"] == "1001"
    T2, R2 = data[:, cols.index("T_abs2")], data[:, cols.index("R_abs2")]
    assert np.max(np.abs(T2 + R2 - 1)) < 1e-12
    mid = data[500]
    assert mid[0] == 0 and mid[1] == 0 and mid[2] == 1
    d = data[:, 0]
    i = np.argmin(np.abs(d - 1.0))
    assert d[i] == pytest.approx(1.0) and R2[i] == pytest.approx(0.5, abs=1e-12)


def test_output_is_deterministic(tmp_path):
    _, a = run(tmp_path, "figure", "fig3", "c", "--x-range=-2,2,9", name="a.csv")
    _, b = run(tmp_path, "figure", "fig3", "c", "--x-range=-2,2,9", "--jobs", "2", name="b.csv")
    assert a.read_bytes() == b.read_bytes()


def test_fig2a_no_correlation_at_zero_interaction(tmp_path):
    code, out = run(tmp_path, "figure", "fig2", "a", "--xi-range", "0,1,2")
    assert code == 0
    _, cols, data = load(out)
    row = data[data[:, 0] == 0.0]
    assert row.shape[0] == 401
    assert np.max(row[:, 2]) <= 25 * 0.01 ** 2


def test_fig3d_bunching_peak_at_two_photon_resonance(tmp_path):
    code, out = run(tmp_path, "figure", "fig3", "d", "--xi-values", ",".join(f"{v:.2f}" for v in np.arange(0, 8.001, 0.02)),
                    "--x-range=-1,1,3")
    assert code == 0
    _, _, data = load(out)
    at0 = data[data[:, 1] == 0.0]
    assert at0[np.argmax(at0[:, 2]), 0] == pytest.approx(4.0, abs=0.02)


def test_fig4c_reflection_blockade_grows(tmp_path):
    code, out = run(tmp_path, "figure", "fig4", "c", "--xi-range", "1,20,39", "--tau-range", "0,5,2")
    assert code == 0
    _, _, data = load(out)
    g0 = data[data[:, 1] == 0.0][:, 2]
    assert np.all(np.diff(g0) < 0)


def test_fig4a_zero_interaction_is_nan(tmp_path):
    code, out = run(tmp_path, "figure", "fig4", "a", "--xi-range", "0,2,2", "--tau-range", "0,1,2")
    assert code == 0
    _, _, data = load(out)
    assert np.all(np.isnan(data[data[:, 0] == 0.0][:, 2]))
    assert np.all(np.isfinite(data[data[:, 0] == 2.0][:, 2]))


def test_g2_reflection_without_interaction(tmp_path):
    code, out = run(tmp_path, "g2", "--xi", "0")
    assert code == 0
    _, _, data = load(out)
    assert np.allclose(data[:, 1], 0.5, atol=0.02)


def test_g2_reflection_blockade(tmp_path):
    code, out = run(tmp_path, "g2", "--xi", "20")
    _, _, data = load(out)
    assert data[0, 0] == 0 and data[0, 1] < 0.05


def test_g2_direct_agrees(tmp_path):
    _, a = run(tmp_path, "g2", "--xi", "2", "--tau-points", "4", name="a.csv")
    _, b = run(tmp_path, "g2", "--xi", "2", "--tau-points", "4", "--direct", name="b.csv")
    assert np.allclose(load(a)[2][:, 1], load(b)[2][:, 1], rtol=1e-3)


def test_g2_x1_override(tmp_path):
    _, out = run(tmp_path, "g2", "--xi", "2", "--x1", "20", "--tau-points", "2")
    header, _, _ = load(out)
    assert header["x1_used"] == "20.0"


def test_g2_ill_conditioned_exit(tmp_path, capsys):
    code, _ = run(tmp_path, "g2", "--xi", "0", "--side", "transmission")
    assert code == 3
    assert "not meaningful" in capsys.readouterr().err


def test_exit_codes(tmp_path):
    assert main(["spectrum", "--out", str(tmp_path / "missing" / "x.csv")]) == 5
    assert main(["figure", "fig2", "a", "--epsilon", "0.1", "--out", str(tmp_path / "x.csv")]) == 2
    assert main(["g2", "--x1", "-1", "--out", str(tmp_path / "x.csv")]) == 2
    assert main(["spectrum", "--gamma", "2", "--out", str(tmp_path / "x.csv")]) == 2
    assert main(["nonsense"]) == 2


def test_config_precedence(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("# preset\nepsilon = 0.02\nxi_values = 1, 3  # cuts\nx-range = -1,1,2\n")
    _, out = run(tmp_path, "figure", "fig3", "c", "--config", str(cfg), "--epsilon", "0.03")
    header, _, data = load(out)
    assert header["epsilon_used"] == "0.03"
    assert sorted(set(data[:, 0])) == [1.0, 3.0]
    assert read_config(cfg)["epsilon"] == 0.02


def test_config_errors(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("unknown = 1\n")
    assert main(["spectrum", "--config", str(bad)]) == 2
    bad.write_text("points = many\n")
    assert main(["spectrum", "--config", str(bad)]) == 2
    assert main(["spectrum", "--config", str(tmp_path / "none.cfg")]) == 2


def test_explicit_gamma_units(tmp_path):
    code, out = run(tmp_path, "spectrum", "--no-gamma-units", "--gamma", "2", "--points", "3", "--delta-min", "-2",
                    "--delta-max", "2")
    assert code == 0
    _, cols, data = load(out)
    assert data[0, cols.index("R_abs2")] == pytest.approx(0.5)


def test_oracle_check_report(tmp_path):
    code, out = run(tmp_path, "oracle-check", "two", "--grid", "61", "--window", "10", "--t-end", "8", "--relaxed",
                    "--l1", "2")
    assert code == 4
    header, cols, rows = load(out)
    assert header["status"] == "FAIL" and cols[0] == "case"
    code, out = run(tmp_path, "oracle-check", "two", "--grid", "61", "--window", "10", "--t-end", "8", "--l1", "2")
    assert code == 3


def test_svg_outputs(tmp_path):
    s1, s2 = tmp_path / "a.svg", tmp_path / "b.svg"
    assert main(["figure", "fig2", "b", "--xi-range", "0,4,3", "--x-range=-1,1,4", "--out", str(tmp_path / "a.csv"),
                 "--svg", str(s1)]) == 0
    assert main(["figure", "fig2", "d", "--x-range=-1,1,4", "--out", str(tmp_path / "b.csv"), "--svg", str(s2)]) == 0
    for p in (s1, s2):
        xml.dom.minidom.parse(str(p))
    assert s1.read_text().count("<rect") > 12
    assert "<polyline" in s2.read_text()


def test_svg_primitives():
    assert svg.color(float("nan")) == "#bbbbbb"
    assert svg.color(0.0) != svg.color(1.0)
    with pytest.raises(ValueError):
        svg.heatmap([0, 1], [0, 1, 2], np.zeros((2, 2)))
    doc = svg.lineplot([0, 1, 2], {"a": [1.0, float("nan"), 2.0]})
    assert doc.count("<polyline") == 2


@settings(max_examples=8)
@given(st.sampled_from(["fig2", "fig3", "fig4"]), st.sampled_from("abd"))
def test_axis_swap_transposes(fig, variant):
    small = dict(xi_range=(0.5, 4.0, 3), x_range=(-1.0, 1.0, 4), tau_range=(0.0, 2.0, 3))
    if fig != "fig4" and variant == "d":
        small["xi_values"] = (1.0, 4.0)
    a, _ = figure_config(fig, variant, **small)
    b, _ = figure_config(fig, variant, swap_axes=True, **small)
    va, vb = run_sweep(a, jobs=1).values, run_sweep(b, jobs=1).values
    assert np.array_equal(va, vb.T, equal_nan=True)


def test_sweep_config_validation():
    with pytest.raises(ParameterError):
        Axis.linspace("xi", 1.0, 1.0, 5)
    with pytest.raises(ParameterError):
        Axis.linspace("xi", 0.0, 1.0, 1)
    with pytest.raises(ParameterError):
        SweepConfig("phi_rr", Axis("xi", (1.0,)), Axis("tau", (0.0,)))
    with pytest.raises(ParameterError):
        SweepConfig("magic", Axis("xi", (1.0,)))
    with pytest.raises(ParameterError):
        figure_config("fig5", "a")
    ok = SweepConfig("phi_rr", Axis("xi", (1.0,)), Axis("x", (0.0,)), epsilon=0.1, allow_wide_packets=True)
    assert run_sweep(ok, jobs=1).values.shape == (1, 1)
