import math

import numpy as np
import pytest

from microrev import channel
from microrev.channel import ChannelParams
from microrev.states import BlochState, ThermalReservoir
from microrev.sweeps import (
    CASES,
    MAP_COLUMNS,
    ExtremumKind,
    Regime,
    SweepGrid,
    diagonal_cut,
    find_extremum,
    gamma_at,
    gamma_curve,
    gamma_map,
    resolve_case,
)


def grid(table, n_i, n_f, col="gamma"):
    return np.asarray(table[col], dtype=float).reshape(n_i, n_f)


def test_regime_branches():
    ti, tf = Regime.HEAT_RELEASE.thetas(np.array([0.0, 1.0]), np.array([0.0, 1.0]))
    assert ti[0] == math.pi and tf[0] == 0.0
    assert np.all(ti >= math.pi / 2) and np.all(tf <= math.pi / 2)
    ti, tf = Regime.HEAT_ABSORB.thetas(np.array([0.3]), np.array([0.3]))
    assert ti[0] <= math.pi / 2 <= tf[0]


def test_grid_validation():
    with pytest.raises(ValueError):
        SweepGrid(1.0, n_i=1)
    with pytest.raises(ValueError):
        SweepGrid(-1.0)
    with pytest.raises(ValueError):
        SweepGrid(1.0, p=1.5)


def test_map_layout():
    t = gamma_map(SweepGrid(2.0, n_i=5, n_f=3), Regime.HEAT_RELEASE)
    assert tuple(t.names) == MAP_COLUMNS and len(t) == 15
    # C_i is the slow index
    assert np.array_equal(t["c_i"][:3], [0.0, 0.0, 0.0]) and np.array_equal(t["c_f"][:3], [0.0, 0.5, 1.0])


@pytest.mark.parametrize("regime", list(Regime))
@pytest.mark.parametrize("beta", [0.1, 1.0, 2.0, 4.0])
def test_map_corners_are_classical(beta, regime):
    g = grid(gamma_map(SweepGrid(beta, n_i=11, n_f=11), regime), 11, 11)
    assert g[0, 0] == pytest.approx(1.0, abs=1e-10)
    assert g[-1, -1] == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("regime", list(Regime))
def test_map_high_temperature_is_nearly_classical(regime):
    t = gamma_map(SweepGrid(0.01), regime)
    assert np.max(np.abs(t["gamma"] - 1)) <= 0.02


@pytest.mark.parametrize("regime", list(Regime))
def test_map_cells_are_consistent(regime):
    t = gamma_map(SweepGrid(2.0, n_i=41, n_f=41), regime)
    for name in ("p_forward", "p_backward", "ratio", "gamma"):
        assert not np.any(np.isnan(t[name]))
    ok = ~t["diverged"]
    assert np.allclose(t["ratio"][ok], t["p_forward"][ok] / t["p_backward"][ok], rtol=1e-12)
    assert np.allclose(t["gamma"][ok], t["ratio"][ok] * np.exp(2.0 * t["q_over_de"][ok]), rtol=1e-12)
    sign = -1 if regime is Regime.HEAT_RELEASE else 1
    assert np.all(sign * t["q_over_de"] >= 0)


def test_map_inversion_symmetry():
    n = 51
    rel = grid(gamma_map(SweepGrid(2.0, n_i=n, n_f=n), Regime.HEAT_RELEASE), n, n)
    ab = grid(gamma_map(SweepGrid(2.0, n_i=n, n_f=n), Regime.HEAT_ABSORB), n, n)
    assert np.max(np.abs(rel.T * ab - 1)) <= 1e-10


def test_map_numeric_matches_closed():
    g = SweepGrid(1.3, p=0.4, n_i=21, n_f=17, phi_i=0.3, phi_f=-0.2)
    a = gamma_map(g, Regime.HEAT_ABSORB)
    b = gamma_map(g, Regime.HEAT_ABSORB, method="numeric")
    for name in ("p_forward", "p_backward", "gamma"):
        assert np.max(np.abs(a[name] - b[name])) <= 1e-9


def test_map_workers_keep_order():
    g = SweepGrid(2.0, n_i=9, n_f=9)
    serial = gamma_map(g, Regime.HEAT_RELEASE, method="numeric")
    parallel = gamma_map(g, Regime.HEAT_RELEASE, method="numeric", workers=3)
    for name in MAP_COLUMNS:
        assert np.array_equal(serial[name], parallel[name])


def test_map_rejects_unknown_method():
    with pytest.raises(ValueError):
        gamma_map(SweepGrid(1.0, n_i=3, n_f=3), Regime.HEAT_RELEASE, method="magic")


def test_gamma_at_matches_channel():
    c = 0.4
    th_i, th_f = Regime.HEAT_RELEASE.thetas(c, 0.7)
    rep = channel.deviation_factor(BlochState(float(th_i)), BlochState(float(th_f)), ChannelParams(0.5), ThermalReservoir(2.0))
    assert float(gamma_at(c, 0.7, 2.0, 0.5, Regime.HEAT_RELEASE)) == pytest.approx(rep.deviation, rel=1e-12)


@pytest.mark.parametrize(
    "beta, regime, ci, cf, gamma, gtol",
    [
        (1.0, Regime.HEAT_RELEASE, 0.74, 0.61, 0.66, 0.02),
        (2.0, Regime.HEAT_RELEASE, 0.73, 0.53, 0.39, 0.02),
        (1.0, Regime.HEAT_ABSORB, 0.61, 0.74, 1.51, 0.02),
        (2.0, Regime.HEAT_ABSORB, 0.53, 0.73, 2.56, 0.03),
    ],
)
def test_extremum_values(beta, regime, ci, cf, gamma, gtol):
    res = find_extremum(beta, 0.5, regime)
    assert res.c_i_star == pytest.approx(ci, abs=0.03)
    assert res.c_f_star == pytest.approx(cf, abs=0.03)
    assert res.gamma_star == pytest.approx(gamma, abs=gtol)
    assert res.kind is (ExtremumKind.MIN if regime is Regime.HEAT_RELEASE else ExtremumKind.MAX)
    assert 0 < res.c_i_star < 1 and 0 < res.c_f_star < 1
    assert res.refinement_residual <= 1e-6


@pytest.mark.parametrize("regime", list(Regime))
def test_extremum_history_is_monotone(regime):
    res = find_extremum(1.5, 0.3, regime)
    h = np.array(res.history)
    assert len(h) == 7
    if regime is Regime.HEAT_RELEASE:
        assert np.all(np.diff(h) <= 0)
    else:
        assert np.all(np.diff(h) >= 0)


def test_extrema_are_reciprocal():
    lo = find_extremum(2.0, 0.5, Regime.HEAT_RELEASE)
    hi = find_extremum(2.0, 0.5, Regime.HEAT_ABSORB)
    assert lo.gamma_star * hi.gamma_star == pytest.approx(1.0, abs=1e-8)
    assert (lo.c_i_star, lo.c_f_star) == pytest.approx((hi.c_f_star, hi.c_i_star), abs=1e-6)


def test_cases():
    assert resolve_case("1") is CASES["classical"]
    assert resolve_case("coherent-coherent").final.coherence == pytest.approx(0.866, abs=1e-3)
    with pytest.raises(ValueError):
        resolve_case("4")


def test_curve_classical_case_is_flat():
    t = gamma_curve("classical", np.linspace(0, 6, 25), p=0.5)
    assert np.max(np.abs(t["gamma"] - 1)) <= 1e-12


def test_curves_have_unit_ratio_at_zero_temperature_factor():
    for name in CASES:
        t = gamma_curve(name, [0.0], p=0.5)
        assert t["ratio"][0] == pytest.approx(1.0, abs=1e-12)


def test_curve_case_two_value():
    t = gamma_curve("coherent-excited", [2.0], p=0.5)
    w_e = 1 / (1 + math.e**2)
    assert t["gamma"][0] == pytest.approx((1 + 2 * w_e) / 2 * math.e, rel=1e-12)
    assert t["gamma"][0] == pytest.approx(1.68, abs=0.005)


@pytest.mark.parametrize("name", ["coherent-excited", "coherent-coherent"])
def test_coherent_curves_approach_one_at_high_temperature(name):
    betas = np.linspace(0.0, 0.4, 41)
    g = gamma_curve(name, betas, p=0.5)["gamma"]
    dev = np.abs(g - 1)
    assert dev[0] == pytest.approx(0.0, abs=1e-12)
    assert np.all(np.diff(dev) >= 0)


def test_diagonal_cut_endpoints_and_reciprocity():
    rel = diagonal_cut(2.0, 0.5, Regime.HEAT_RELEASE)
    ab = diagonal_cut(2.0, 0.5, Regime.HEAT_ABSORB)
    for t in (rel, ab):
        assert t["gamma"][0] == pytest.approx(1.0, abs=1e-10)
        assert t["gamma"][-1] == pytest.approx(1.0, abs=1e-10)
    assert np.max(np.abs(rel["gamma"] * ab["gamma"] - 1)) <= 1e-10
    assert rel["gamma"].min() < 1 < ab["gamma"].max()
    with pytest.raises(ValueError):
        diagonal_cut(2.0, 0.5, Regime.HEAT_RELEASE, n_points=1)
