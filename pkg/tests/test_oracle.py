import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rydberg_blockade.errors import (
    DomainError,
    InsufficientHorizonError,
    ParameterError,
    PrematureExtractionError,
    ResolutionWarning,
    WindowTooNarrowError,
)
from rydberg_blockade.oracle import (
    KGrid,
    discretize_single,
    discretize_two,
    evolve_single,
    evolve_two,
    extract_longtime_single,
    extract_longtime_two,
    laplace_Bk_closed,
    laplace_numeric,
    read_snapshot,
    relative_l2_error,
    write_snapshot,
)
from rydberg_blockade.oracle.checks import SingleCheckConfig, TwoCheckConfig, default_t_end, single_photon_check, two_photon_check
from rydberg_blockade.scatter import PulseSpec, SystemParams
from rydberg_blockade.twophoton import TwoPhotonInput, d0

pytestmark = pytest.mark.filterwarnings("ignore::rydberg_blockade.errors.ResolutionWarning")


def small_two(xi=2.0, M=61, window=10.0, eps=0.1, l1=2.0, E=0.0):
    grid = KGrid(window, M)
    inp = TwoPhotonInput.from_detunings(E, 0.0, eps, l1)
    return discretize_two(inp, grid), SystemParams(xi=xi), inp


def test_grid_basics():
    g = KGrid(2.0, 5)
    assert np.allclose(g.deltas, [-2, -1, 0, 1, 2])
    assert g.spacing == 1.0
    assert g.recurrence_time == pytest.approx(2 * math.pi)
    assert g.g_eff(SystemParams()) == pytest.approx(SystemParams().g)
    assert g.default_dt() == 0.025
    with pytest.raises(ParameterError):
        KGrid(1.0, 4)
    with pytest.raises(ParameterError):
        KGrid(-1.0, 5)


@given(st.floats(-5, 5), st.floats(0.01, 1.0))
def test_coverage_is_a_probability(c, eps):
    cov = KGrid(10.0, 101).lorentzian_coverage(c, eps)
    assert 0 < cov < 1


def test_single_discretization_normalized():
    s = discretize_single(PulseSpec(0.0, 0.1, 5.0), KGrid(20.0, 801))
    assert s.norm() == pytest.approx(1.0, abs=1e-14)
    assert 0.99 < s.raw_norm < 1.01
    with pytest.raises(WindowTooNarrowError):
        discretize_single(PulseSpec(0.0, 0.5, 0.0), KGrid(5.0, 101))


def test_coverage_warning():
    with pytest.warns(ResolutionWarning):
        discretize_single(PulseSpec(0.0, 0.1, 0.0), KGrid(20.0, 401))


@settings(max_examples=10)
@given(st.floats(0, 20), st.floats(-2, 2))
def test_two_photon_evolution_conserves_norm_and_symmetry(xi, E):
    state, params, _ = small_two(xi=xi, E=E)
    out = evolve_two(state, params, 6.0)
    assert out.norm_drift < 1e-8
    assert np.array_equal(out.B, out.C)
    full = out.D_full()
    assert np.array_equal(full, full.T)


def test_two_photon_initial_norm_tracks_sampling():
    state, _, inp = small_two(M=401, window=20.0, eps=0.1)
    assert abs(state.initial_norm - 1.0) < 0.05
    assert state.photon_norm() == pytest.approx(state.initial_norm)
    # stored upper triangle equals the symmetric sample
    k = state.grid.deltas
    assert np.allclose(state.D_full(), d0(k[:, None], k[None, :], inp) * state.grid.spacing)


def test_single_evolution_composes():
    grid = KGrid(10.0, 201)
    s0 = discretize_single(PulseSpec(0.0, 0.1, 3.0), grid)
    p = SystemParams()
    dt = grid.default_dt()
    one = evolve_single(s0, p, 4.0, dt)
    two = evolve_single(evolve_single(s0, p, 2.0, dt), p, 4.0, dt)
    assert np.allclose(one.beta, two.beta, atol=1e-13)
    assert one.alpha1 == one.alpha2


def test_norm_drift_at_admissible_coarse_step():
    grid = KGrid(10.0, 501)
    s0 = discretize_single(PulseSpec(0.0, 0.1, 10.0), grid)
    out = evolve_single(s0, SystemParams(), 60.0, dt=5e-3)
    assert out.norm_drift < 1e-8


def test_atoms_relax_after_packet():
    grid = KGrid(20.0, 801)
    s0 = discretize_single(PulseSpec(0.0, 0.1, 5.0), grid)
    out = evolve_single(s0, SystemParams(), 80.0)
    assert abs(out.alpha1) ** 2 < 1e-3 and abs(out.alpha2) ** 2 < 1e-3
    assert 0.998 <= discretize_single(PulseSpec(0.0, 0.1, 0.0), KGrid(40.0, 2001)).raw_norm


def test_weak_coupling_is_free_evolution():
    grid = KGrid(10.0, 101)
    s0 = discretize_single(PulseSpec(0.0, 0.1, 2.0), grid)
    out = evolve_single(s0, SystemParams(gamma=1e-14), 3.0)
    assert np.allclose(out.beta, s0.beta * np.exp(-1j * grid.deltas * 3.0), atol=1e-8)


def test_evolve_rejects_backwards_time():
    grid = KGrid(10.0, 101)
    s0 = discretize_single(PulseSpec(0.0, 0.1, 0.0), grid)
    with pytest.raises(ValueError):
        evolve_single(s0, SystemParams(), -1.0)


def test_coarse_dt_warns():
    grid = KGrid(10.0, 101)
    s0 = discretize_single(PulseSpec(0.0, 0.1, 0.0), grid)
    with pytest.warns(ResolutionWarning):
        evolve_single(s0, SystemParams(), 0.1, dt=0.05)


def test_premature_extraction():
    state, params, _ = small_two(l1=0.5)
    mid = evolve_two(state, params, 1.5)
    with pytest.raises(PrematureExtractionError):
        extract_longtime_two(mid)
    assert extract_longtime_two(mid, check=False).shape == (61, 61)
    s1 = evolve_single(discretize_single(PulseSpec(0.0, 0.1, 0.5), KGrid(10.0, 61)), params, 1.5)
    with pytest.raises(PrematureExtractionError):
        extract_longtime_single(s1)


def test_relative_error():
    assert relative_l2_error([1.0, 1.0], [1.0, 1.0]) == 0
    assert relative_l2_error([2.0], [1.0]) == 1.0


def _discrete_laplace(s, state, params):
    """Exact Laplace transform of B_k for the discrete equations, by a linear solve."""
    grid = state.grid
    k = grid.deltas
    g = grid.g_eff(params)
    Dz = state.D_full()
    den = s + 1j * (k[:, None] + k[None, :])
    G = g * g * np.ones((k.size, k.size))
    mat = np.diag(s + 1j * k + 2 * (g * g / den).sum(0)) + 2 * G / (s + 1j * params.xi) + 2 * G / den
    rhs = -1j * (g * Dz / den).sum(0)
    return np.linalg.solve(mat, rhs) / math.sqrt(grid.spacing)


def test_integrator_matches_exact_discrete_transform():
    grid = KGrid(10.0, 101)
    inp = TwoPhotonInput.from_detunings(0.0, 0.0, 0.1, 2.0)
    params = SystemParams(xi=1.0)
    state = discretize_two(inp, grid)
    modes = [50, 60]
    out = evolve_two(state, params, 16.0, record=modes)
    series = out.trace.continuum()
    for s in (1.0, 1.2 - 0.5j, 1.5 + 0.5j):
        exact = _discrete_laplace(s, state, params)
        for j, m in enumerate(modes):
            num = laplace_numeric(out.trace.times, series[:, j], s)
            assert num == pytest.approx(exact[m], rel=1e-5)


def test_laplace_numeric_on_exponential():
    t = np.linspace(0, 40, 4001)
    b = np.exp(-(0.5 + 2j) * t)
    s = 0.7 - 0.3j
    assert laplace_numeric(t, b, s) == pytest.approx(1 / (s + 0.5 + 2j), rel=1e-8)


def test_laplace_numeric_guards():
    t = np.linspace(0, 5, 101)
    with pytest.raises(InsufficientHorizonError):
        laplace_numeric(t, np.ones_like(t), 1.0)
    with pytest.raises(DomainError):
        laplace_numeric(t, np.ones_like(t), -1.0)
    with pytest.raises(ValueError):
        laplace_numeric(t, np.ones(3), 1.0)


def test_laplace_closed_domain():
    inp = TwoPhotonInput.from_detunings(0.0, 0.0, 0.1, 5.0)
    with pytest.raises(DomainError):
        laplace_Bk_closed(0.0, 0.0, inp, SystemParams(xi=1.0))
    v = laplace_Bk_closed(0.5 + 0.2j, 0.3, inp, SystemParams(xi=1.0))
    assert np.isfinite(v)


def test_laplace_closed_decays_for_large_s():
    inp = TwoPhotonInput.from_detunings(0.0, 0.0, 0.1, 2.0)
    p = SystemParams(xi=1.0)
    a = abs(laplace_Bk_closed(1.0, 0.0, inp, p))
    b = abs(laplace_Bk_closed(4.0, 0.0, inp, p))
    assert b < a


def test_snapshot_roundtrip(tmp_path):
    state, params, _ = small_two(M=31, window=10.0)
    out = evolve_two(state, params, 1.0)
    path = tmp_path / "two.txt"
    write_snapshot(path, out, {"note": "x"})
    back, meta = read_snapshot(path)
    assert meta["note"] == "x" and meta["kind"] == "two"
    assert back.grid == out.grid and back.t == out.t
    assert np.array_equal(back.D_full(), out.D_full())
    assert np.array_equal(back.B, out.B) and back.A == out.A
    single = discretize_single(PulseSpec(0.0, 0.1, 0.0), KGrid(10.0, 41))
    write_snapshot(tmp_path / "one.txt", single)
    b1, _ = read_snapshot(tmp_path / "one.txt")
    assert np.array_equal(b1.beta, single.beta)
    text = (tmp_path / "one.txt").read_text().splitlines()
    assert text[0].startswith("# ") and any(l.startswith("# columns=") for l in text)


def test_snapshot_rejects_foreign_file(tmp_path):
    p = tmp_path / "x.txt"
    p.write_text("# format=other\n1,2\n")
    with pytest.raises(ValueError):
        read_snapshot(p)


def test_default_horizon():
    g = KGrid(20.0, 201)
    assert default_t_end(10.0, 0.1, g) == pytest.approx(10.0 + 0.75 * g.recurrence_time)
    assert default_t_end(10.0, 0.1, KGrid(20.0, 1001)) == pytest.approx(90.0)


def test_small_single_check_runs():
    r = single_photon_check(SingleCheckConfig(epsilon=0.1, l=3.0, M=801, window=20.0, t_end=50.0))
    assert r.error < 0.05
    assert abs(abs(r.meta["phase_at_resonance"]) - math.pi) < 0.05


def test_small_two_check_runs():
    r = two_photon_check(TwoCheckConfig(epsilon=0.1, l1=2.0, M=81, window=10.0, xis=(0.0, 2.0)), strict=False)
    assert len(r.rows) == 2
    assert all(np.isfinite(e) for _, e in r.rows)
