"""Generalized amplitude damping: transition probabilities and the deviation factor.

Each transition probability is available twice: ``*_numeric`` builds the
joint system-reservoir operators and takes the trace explicitly, while
``*_closed`` evaluates the analytic expression. Sweeps use the closed
forms through the array kernels at the bottom of this module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .linalg import conjugate_transpose, partial_trace, projector, tensor
from .states import (
    BlochState,
    EnergySpec,
    ThermalReservoir,
    bloch_density,
    bloch_ket,
    heat,
    thermal_state,
    time_reverse,
)

#: float dust allowed outside [0, 1] before a probability is clamped
CLAMP_TOL = 1e-12
#: backward probabilities at or below this are reported as divergent
DIVERGENCE_FLOOR = 1e-300


class ConsistencyError(ArithmeticError):
    """A probability left [0, 1] by more than float rounding."""


@dataclass(frozen=True)
class ChannelParams:
    p: float

    def __post_init__(self):
        if not (0.0 <= self.p <= 1.0):
            raise ValueError(f"damping parameter p must lie in [0, 1], got {self.p!r}")


@dataclass(frozen=True)
class TimeMap:
    tau: float

    def __post_init__(self):
        if not self.tau > 0.0:
            raise ValueError(f"tau must be > 0, got {self.tau!r}")


@dataclass(frozen=True)
class TransitionReport:
    p_forward: float
    p_backward: float
    ratio: float
    gamma_small: float
    q_heat: float
    deviation: float
    classical_ratio: float
    diverged: bool


class RatioResult(NamedTuple):
    ratio: float
    gamma_small: float
    diverged: bool


def gadc_unitary(c: ChannelParams) -> np.ndarray:
    """Joint unitary mixing ``|g,E_e>`` and ``|e,E_g>``."""
    s, k = math.sqrt(1.0 - c.p), math.sqrt(c.p)
    return np.array(
        [
            [1, 0, 0, 0],
            [0, s, k, 0],
            [0, -k, s, 0],
            [0, 0, 0, 1],
        ],
        dtype=np.complex128,
    )


def p_from_time(t: float, m: TimeMap) -> ChannelParams:
    """``p = exp(-t / tau)``; note t = 0 gives p = 1 (full damping)."""
    if t < 0:
        raise ValueError(f"time must be >= 0, got {t!r}")
    return ChannelParams(math.exp(-t / m.tau))


def clamp_probability(x: float) -> float:
    if -CLAMP_TOL <= x < 0.0:
        return 0.0
    if 1.0 < x <= 1.0 + CLAMP_TOL:
        return 1.0
    if not (0.0 <= x <= 1.0):
        raise ConsistencyError(f"probability {x!r} outside [0, 1]")
    return x


def clamp_probabilities(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    bad = (x < -CLAMP_TOL) | (x > 1.0 + CLAMP_TOL) | np.isnan(x)
    if np.any(bad):
        raise ConsistencyError(f"{int(bad.sum())} probabilities outside [0, 1]")
    return np.clip(x, 0.0, 1.0)


def evolved_system(initial: BlochState, c: ChannelParams, r: ThermalReservoir, unitary=None) -> np.ndarray:
    """Reduced system state after the joint unitary acts on ``rho_i (x) rho_th``."""
    u = gadc_unitary(c) if unitary is None else unitary
    joint = u @ tensor(bloch_density(initial), thermal_state(r)) @ conjugate_transpose(u)
    return partial_trace(joint, keep=0, dims=(2, 2))


def _trace_probability(start: BlochState, measured: BlochState, u: np.ndarray, r: ThermalReservoir) -> float:
    joint = u @ tensor(bloch_density(start), thermal_state(r)) @ conjugate_transpose(u)
    effect = tensor(projector(bloch_ket(measured)), np.eye(2))
    value = np.trace(joint @ effect)
    if abs(value.imag) > CLAMP_TOL:
        raise ConsistencyError(f"trace has imaginary part {value.imag!r}")
    return clamp_probability(float(value.real))


def forward_prob_numeric(initial: BlochState, final: BlochState, c: ChannelParams, r: ThermalReservoir) -> float:
    return _trace_probability(initial, final, gadc_unitary(c), r)


def backward_prob_numeric(initial: BlochState, final: BlochState, c: ChannelParams, r: ThermalReservoir) -> float:
    """Start in the time-reversed final state, evolve with ``U^dagger``, measure the time-reversed initial state."""
    u_rev = conjugate_transpose(gadc_unitary(c))
    return _trace_probability(time_reverse(final), time_reverse(initial), u_rev, r)


# -- closed forms -------------------------------------------------------------


def coherence_term(theta_i, theta_f, dphi, p):
    """The shared term ``1 + sqrt(1-p) sin(theta_i) sin(theta_f) cos(phi_i - phi_f)``."""
    return 1.0 + np.sqrt(1.0 - p) * np.sin(theta_i) * np.sin(theta_f) * np.cos(dphi)


def forward_kernel(theta_i, theta_f, dphi, p, w_e):
    """Unclamped forward probability; broadcasts over array arguments."""
    ci, cf = np.cos(theta_i), np.cos(theta_f)
    return 0.5 * (cf * ((1.0 - p) * ci + (1.0 - 2.0 * w_e) * p) + coherence_term(theta_i, theta_f, dphi, p))


def backward_kernel(theta_i, theta_f, dphi, p, w_e):
    ci, cf = np.cos(theta_i), np.cos(theta_f)
    return 0.5 * (ci * ((1.0 - p) * cf + (1.0 - 2.0 * w_e) * p) + coherence_term(theta_i, theta_f, dphi, p))


def forward_prob_closed(initial: BlochState, final: BlochState, c: ChannelParams, r: ThermalReservoir) -> float:
    value = forward_kernel(initial.theta, final.theta, initial.phi - final.phi, c.p, r.w_e)
    return clamp_probability(float(value))


def backward_prob_closed(initial: BlochState, final: BlochState, c: ChannelParams, r: ThermalReservoir) -> float:
    value = backward_kernel(initial.theta, final.theta, initial.phi - final.phi, c.p, r.w_e)
    return clamp_probability(float(value))


def _safe_ratio(num: float, den: float) -> tuple[float, bool]:
    if den <= DIVERGENCE_FLOOR:
        return math.inf, True
    return num / den, False


def microrev_ratio(initial: BlochState, final: BlochState, c: ChannelParams, r: ThermalReservoir) -> RatioResult:
    """``P_F / P_B`` together with the shared coherence term."""
    pf = forward_prob_closed(initial, final, c, r)
    pb = backward_prob_closed(initial, final, c, r)
    ratio, diverged = _safe_ratio(pf, pb)
    g = float(coherence_term(initial.theta, final.theta, initial.phi - final.phi, c.p))
    return RatioResult(ratio, g, diverged)


def deviation_factor(
    initial: BlochState,
    final: BlochState,
    c: ChannelParams,
    r: ThermalReservoir,
    e: EnergySpec = EnergySpec(),
    numeric: bool = False,
) -> TransitionReport:
    """Full report for one forward/backward pair.

    The deviation factor is ``(P_F / P_B) * exp(beta Q)``; it equals one
    exactly when the classical relation ``P_F / P_B = exp(-beta Q)`` holds.
    With ``numeric=True`` the probabilities come from explicit traces.
    """
    if numeric:
        pf = forward_prob_numeric(initial, final, c, r)
        pb = backward_prob_numeric(initial, final, c, r)
    else:
        pf = forward_prob_closed(initial, final, c, r)
        pb = backward_prob_closed(initial, final, c, r)
    ratio, diverged = _safe_ratio(pf, pb)
    q = heat(initial, final, e)
    beta_q = r.effective_beta_delta_e * q / e.delta_e
    deviation = math.inf if diverged else ratio * math.exp(beta_q)
    g = float(coherence_term(initial.theta, final.theta, initial.phi - final.phi, c.p))
    return TransitionReport(
        p_forward=pf,
        p_backward=pb,
        ratio=ratio,
        gamma_small=g,
        q_heat=q,
        deviation=deviation,
        classical_ratio=math.exp(-beta_q),
        diverged=diverged,
    )


def deviation_arrays(theta_i, theta_f, dphi, p: float, r: ThermalReservoir) -> dict[str, np.ndarray]:
    """Vectorized closed-form evaluation over broadcast angle arrays.

    Returns a dict with ``p_forward, p_backward, ratio, q_over_de, gamma,
    diverged``; divergent cells carry ``inf`` in ``ratio`` and ``gamma``.
    """
    theta_i, theta_f, dphi = np.broadcast_arrays(
        np.asarray(theta_i, float), np.asarray(theta_f, float), np.asarray(dphi, float)
    )
    pf = clamp_probabilities(forward_kernel(theta_i, theta_f, dphi, p, r.w_e))
    pb = clamp_probabilities(backward_kernel(theta_i, theta_f, dphi, p, r.w_e))
    diverged = pb <= DIVERGENCE_FLOOR
    safe_pb = np.where(diverged, 1.0, pb)
    ratio = np.where(diverged, np.inf, pf / safe_pb)
    q_over_de = 0.5 * (np.cos(theta_i) - np.cos(theta_f))
    gamma = np.where(diverged, np.inf, ratio * np.exp(r.effective_beta_delta_e * q_over_de))
    return {
        "p_forward": pf,
        "p_backward": pb,
        "ratio": ratio,
        "q_over_de": q_over_de,
        "gamma": gamma,
        "diverged": diverged,
    }
