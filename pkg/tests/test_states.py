import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from microrev.linalg import expectation
from microrev.states import (
    BETA_DELTA_E_CAP,
    BlochState,
    CoherenceBranch,
    EnergySpec,
    ThermalReservoir,
    bloch_density,
    bloch_ket,
    coherence_l1,
    heat,
    thermal_state,
    theta_from_coherence,
    time_reverse,
)

from conftest import bloch_states, random_state


def test_bloch_ket_poles_and_equator():
    assert np.allclose(bloch_ket(BlochState(0.0, 0.0)), [1, 0], atol=1e-15)
    assert abs(bloch_ket(BlochState(math.pi, 1.234))[0]) <= 1e-12
    assert np.allclose(bloch_ket(BlochState(math.pi / 2, 0.0)), np.array([1, 1]) / math.sqrt(2), atol=1e-15)


@given(bloch_states)
def test_bloch_ket_normalized_and_canonical(s):
    v = bloch_ket(s)
    assert abs(np.vdot(v, v).real - 1) <= 1e-12
    assert v[0].imag == 0 and v[0].real >= 0


def test_bloch_state_validation_and_wrapping():
    with pytest.raises(ValueError):
        BlochState(-0.1)
    with pytest.raises(ValueError):
        BlochState(math.pi + 1e-9)
    with pytest.raises(ValueError):
        BlochState(1.0, math.inf)
    assert BlochState(1.0, math.pi).phi == -math.pi
    assert BlochState(1.0, 3 * math.pi / 2).phi == pytest.approx(-math.pi / 2)


def test_time_reverse_examples():
    assert time_reverse(BlochState(0.7, 0.0)) == BlochState(0.7, 0.0)
    tr = time_reverse(BlochState(math.pi / 2, math.pi / 3))
    assert tr.theta == math.pi / 2 and tr.phi == -math.pi / 3
    # energy eigenstates are invariant
    for th in (0.0, math.pi):
        assert np.allclose(bloch_density(time_reverse(BlochState(th, 0.4))), bloch_density(BlochState(th, 0.4)))


def test_time_reverse_involution(rng):
    for _ in range(1000):
        s = random_state(rng)
        assert time_reverse(time_reverse(s)) == s


def test_time_reverse_conjugates_ket(rng):
    for _ in range(100):
        s = random_state(rng)
        assert np.allclose(bloch_ket(time_reverse(s)), bloch_ket(s).conj(), atol=1e-15)


def test_thermal_state_limits():
    assert np.allclose(thermal_state(ThermalReservoir(BETA_DELTA_E_CAP)), np.diag([1, 0]), atol=1e-12)
    assert ThermalReservoir(1e4).capped and ThermalReservoir(math.inf).w_e == 0.0
    assert not ThermalReservoir(BETA_DELTA_E_CAP).capped
    assert np.array_equal(thermal_state(ThermalReservoir(0.0)), np.diag([0.5, 0.5]))
    assert ThermalReservoir(2.0).w_e == pytest.approx(1 / (1 + math.e**2), abs=1e-15)
    assert ThermalReservoir(2.0).w_e == pytest.approx(0.119203, abs=1e-6)
    with pytest.raises(ValueError):
        ThermalReservoir(-1.0)


@given(st.floats(0.0, 1e4))
def test_reservoir_populations(b):
    r = ThermalReservoir(b)
    assert r.w_g + r.w_e == pytest.approx(1.0, abs=1e-15)
    assert 0.0 <= r.w_e <= 0.5


def test_w_e_monotone():
    w = [ThermalReservoir(b).w_e for b in np.linspace(0, 20, 100)]
    assert all(x > y for x, y in zip(w, w[1:]))


@given(st.floats(0.0, 50.0), st.floats(0.01, 10.0))
def test_thermal_state_commutes_with_hamiltonian(b, de):
    h = EnergySpec(de).hamiltonian()
    rho = thermal_state(ThermalReservoir(b))
    assert np.max(np.abs(h @ rho - rho @ h)) <= 1e-14


def test_coherence_examples():
    assert coherence_l1(thermal_state(ThermalReservoir(1.0))) == 0
    assert coherence_l1(np.eye(2) / 2) == 0


@given(bloch_states)
def test_coherence_of_pure_state_is_sin_theta(s):
    assert coherence_l1(bloch_density(s)) == pytest.approx(math.sin(s.theta), abs=1e-12)


def test_theta_from_coherence_examples():
    assert theta_from_coherence(0.0, CoherenceBranch.LOWER) == 0.0
    assert theta_from_coherence(0.0, CoherenceBranch.UPPER) == math.pi
    for b in CoherenceBranch:
        assert theta_from_coherence(1.0, b) == pytest.approx(math.pi / 2, abs=1e-15)
    assert math.sin(theta_from_coherence(0.87, CoherenceBranch.LOWER)) == pytest.approx(0.87, abs=1e-15)
    with pytest.raises(ValueError):
        theta_from_coherence(1.01, CoherenceBranch.LOWER)
    with pytest.raises(ValueError):
        theta_from_coherence(-0.01, CoherenceBranch.UPPER)


@given(st.floats(0.0, 1.0), st.sampled_from(list(CoherenceBranch)), st.floats(-math.pi, math.pi, exclude_max=True))
def test_theta_from_coherence_right_inverse(c, branch, phi):
    th = theta_from_coherence(c, branch)
    if branch is CoherenceBranch.LOWER:
        assert 0.0 <= th <= math.pi / 2
    else:
        assert math.pi / 2 <= th <= math.pi
    assert coherence_l1(bloch_density(BlochState(th, phi))) == pytest.approx(c, abs=1e-12)


def test_heat_examples():
    assert heat(BlochState(0.0), BlochState(math.pi)) == pytest.approx(1.0)
    assert heat(BlochState(0.0), BlochState(math.pi), EnergySpec(2.5)) == pytest.approx(2.5)
    assert heat(BlochState(1.1, 0.2), BlochState(1.1, -2.0)) == 0.0
    assert heat(BlochState(math.pi / 2), BlochState(math.pi)) == pytest.approx(0.5, abs=1e-15)


@given(bloch_states, bloch_states, st.floats(0.1, 10.0))
def test_heat_matches_energy_expectation_and_is_antisymmetric(a, b, de):
    e = EnergySpec(de)
    oracle = expectation(bloch_density(b) - bloch_density(a), e.hamiltonian()).real
    assert heat(a, b, e) == pytest.approx(oracle, abs=1e-12 * max(1.0, de))
    assert heat(a, b, e) == -heat(b, a, e)


def test_energy_spec_validation():
    with pytest.raises(ValueError):
        EnergySpec(0.0)
