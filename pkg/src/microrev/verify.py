"""Self-check suites run by ``microrev verify``.

Each suite is a function returning ``(check_name, passed)`` pairs. Modules
are referenced through their attributes at call time so that a patched
formula is picked up by the checks.
"""

from __future__ import annotations

import math
from typing import Callable, Iterable

import numpy as np

from . import channel, linalg, photonics, states, sweeps

Check = tuple[str, bool]
SUITES: dict[str, Callable[[], Iterable[Check]]] = {}


def suite(name: str):
    def register(fn):
        SUITES[name] = fn
        return fn

    return register


def _random_state(rng) -> "states.BlochState":
    return states.BlochState(math.acos(rng.uniform(-1, 1)), rng.uniform(-math.pi, math.pi))


def _random_unitary(rng, n: int) -> np.ndarray:
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


@suite("linalg")
def linalg_suite(seed: int = 11) -> Iterable[Check]:
    rng = np.random.default_rng(seed)
    mats = [rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)) for _ in range(4)]
    a, b, c, d = mats
    lhs = linalg.tensor(a, b) @ linalg.tensor(c, d)
    yield "mixed product", np.allclose(lhs, linalg.tensor(a @ c, b @ d), atol=1e-12, rtol=0)
    yield "identity tensor", np.array_equal(linalg.tensor(np.eye(2), np.eye(2)), np.eye(4))
    rho_a, rho_b = states.bloch_density(_random_state(rng)), states.thermal_state(states.ThermalReservoir(1.3))
    prod = linalg.tensor(rho_a, rho_b)
    yield "partial trace keeps system", np.allclose(linalg.partial_trace(prod, 0, (2, 2)), rho_a, atol=1e-12)
    yield "partial trace keeps reservoir", np.allclose(linalg.partial_trace(prod, 1, (2, 2)), rho_b, atol=1e-12)
    u = _random_unitary(rng, 4)
    red = linalg.partial_trace(u @ prod @ linalg.conjugate_transpose(u), 0, (2, 2))
    yield "reduced state is physical", linalg.is_density_matrix(red)


@suite("states")
def states_suite(seed: int = 12) -> Iterable[Check]:
    rng = np.random.default_rng(seed)
    ok_norm = ok_coh = ok_inv = True
    for _ in range(200):
        s = _random_state(rng)
        v = states.bloch_ket(s)
        ok_norm &= abs(np.vdot(v, v).real - 1.0) <= 1e-12
        ok_coh &= abs(states.coherence_l1(states.bloch_density(s)) - math.sin(s.theta)) <= 1e-12
        ok_inv &= states.time_reverse(states.time_reverse(s)) == s
    yield "kets normalized", bool(ok_norm)
    yield "coherence equals sin(theta)", bool(ok_coh)
    yield "time reversal is an involution", bool(ok_inv)
    a, b = states.BlochState(math.pi / 2), states.BlochState(math.pi)
    yield "heat example", abs(states.heat(a, b) - 0.5) <= 1e-12


@suite("channel-oracle")
def channel_oracle_suite(seed: int = 13, n: int = 500) -> Iterable[Check]:
    rng = np.random.default_rng(seed)
    worst_f = worst_b = 0.0
    for _ in range(n):
        si, sf = _random_state(rng), _random_state(rng)
        c = channel.ChannelParams(rng.uniform(0, 1))
        r = states.ThermalReservoir(rng.uniform(0, 10))
        worst_f = max(worst_f, abs(channel.forward_prob_closed(si, sf, c, r) - channel.forward_prob_numeric(si, sf, c, r)))
        worst_b = max(worst_b, abs(channel.backward_prob_closed(si, sf, c, r) - channel.backward_prob_numeric(si, sf, c, r)))
    yield "forward closed form equals trace", worst_f <= 1e-9
    yield "backward closed form equals trace", worst_b <= 1e-9
    g, e = states.BlochState(0.0), states.BlochState(math.pi)
    ok = True
    for p in (0.1, 0.5, 0.9):
        for beta in (0.5, 2.0):
            rr = channel.microrev_ratio(g, e, channel.ChannelParams(p), states.ThermalReservoir(beta))
            ok &= abs(rr.ratio / math.exp(-beta) - 1.0) <= 1e-10
    yield "classical ratio recovered", bool(ok)


@suite("symmetry")
def symmetry_suite() -> Iterable[Check]:
    grid = sweeps.SweepGrid(2.0, 0.5, 51, 51)
    rel = sweeps.gamma_map(grid, sweeps.Regime.HEAT_RELEASE)["gamma"].reshape(51, 51)
    ab = sweeps.gamma_map(grid, sweeps.Regime.HEAT_ABSORB)["gamma"].reshape(51, 51)
    yield "release transpose times absorb is one", bool(np.max(np.abs(rel.T * ab - 1.0)) <= 1e-10)
    cut_r = sweeps.diagonal_cut(2.0, 0.5, sweeps.Regime.HEAT_RELEASE, 101)["gamma"]
    cut_a = sweeps.diagonal_cut(2.0, 0.5, sweeps.Regime.HEAT_ABSORB, 101)["gamma"]
    yield "diagonal cuts are reciprocal", bool(np.max(np.abs(cut_r * cut_a - 1.0)) <= 1e-10)


@suite("photonic-equivalence")
def photonic_suite(seed: int = 14, n: int = 100) -> Iterable[Check]:
    rng = np.random.default_rng(seed)
    worst_pipe = worst_channel = 0.0
    for _ in range(n):
        s = states.BlochState(rng.uniform(0, math.pi))
        r = states.ThermalReservoir(rng.uniform(0, 10))
        c = channel.ChannelParams(rng.uniform(0, 1))
        x = photonics.param_map(s, r, c)
        rho_pipe = photonics.pipeline_joint_state(x)
        worst_pipe = max(worst_pipe, np.max(np.abs(rho_pipe - photonics.evolve_interferometer(x))))
        rho_s = photonics.reduced_system(rho_pipe)
        worst_channel = max(worst_channel, np.max(np.abs(rho_s - channel.evolved_system(s, c, r))))
    yield "pipeline equals closed-form evolved state", worst_pipe <= 1e-10
    yield "photonic system state equals channel state", worst_channel <= 1e-10


@suite("limits")
def limits_suite(seed: int = 15) -> Iterable[Check]:
    rng = np.random.default_rng(seed)
    ok = True
    for _ in range(100):
        rep = channel.deviation_factor(_random_state(rng), _random_state(rng), channel.ChannelParams(rng.uniform(0, 1)), states.ThermalReservoir(0.0))
        ok &= rep.diverged or abs(rep.deviation - 1.0) <= 1e-12
    yield "unit deviation at infinite temperature", bool(ok)
    ok = True
    for beta in (0.1, 1.0, 2.0, 4.0):
        for regime in sweeps.Regime:
            g = sweeps.gamma_at(np.array([0.0, 1.0]), np.array([0.0, 1.0]), beta, 0.5, regime)
            ok &= bool(np.all(np.abs(g - 1.0) <= 1e-10))
    yield "unit deviation at incoherent and maximally coherent corners", bool(ok)


def run_all(names: Iterable[str] | None = None) -> dict:
    """Run the selected suites and return a JSON-ready summary."""
    summary = {"suites": [], "ok": True}
    for name in names or SUITES:
        results = []
        try:
            results = [(check, bool(passed)) for check, passed in SUITES[name]()]
        except Exception as exc:  # a crashing suite counts as a failure
            results.append((f"raised {type(exc).__name__}: {exc}", False))
        failed = [check for check, passed in results if not passed]
        summary["suites"].append({"name": name, "passed": len(results) - len(failed), "failed": len(failed), "failures": failed})
        summary["ok"] &= not failed
    return summary
