"""Digital twin of the two-layer photonic interferometer.

The photon lives in an 8-dimensional space: path column ``l/r`` (system
``g/e``) x path layer ``d/u`` (reservoir ``E_g/E_e``) x polarization
``H/V``. Basis index is ``4*column + 2*layer + polarization``, so tracing
out polarization leaves the 4-path operator in the order
``ld, lu, rd, ru`` which coincides with ``|g,E_g>, |g,E_e>, |e,E_g>, |e,E_e>``.

Polarization plays the role of the reservoir purification: after the
second beam displacer the reservoir branch ``d`` carries ``H`` and branch
``u`` carries ``V``. The evolution stage keeps each branch on a single
polarization at its output, so tracing polarization yields the two-branch
mixture for the evolved system-reservoir state.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .channel import ChannelParams, clamp_probability
from .linalg import ALGEBRA_TOL, partial_trace, projector
from .states import BlochState, ThermalReservoir, bloch_ket, time_reverse

PATHS = ("ld", "lu", "rd", "ru")
_COLUMN = {"l": 0, "r": 1}
_LAYER = {"d": 0, "u": 1}
_POL = {"H": 0, "V": 1}


class ConfigurationError(ValueError):
    """An optical element addresses paths that do not exist or cannot pair up."""


def basis_index(path: str, pol: str) -> int:
    return 4 * _COLUMN[path[0]] + 2 * _LAYER[path[1]] + _POL[pol]


def _check_paths(paths: Sequence[str]) -> tuple[str, ...]:
    paths = tuple(paths)
    unknown = [p for p in paths if p not in PATHS]
    if unknown:
        raise ConfigurationError(f"unknown optical paths {unknown}; layout has {PATHS}")
    if len(set(paths)) != len(paths):
        raise ConfigurationError(f"duplicate paths in {paths}")
    return paths


# -- elements -------------------------------------------------------------


def hwp_jones(angle: float) -> np.ndarray:
    """Half-wave plate at `angle`: a reflection in the H/V plane."""
    c, s = math.cos(2.0 * angle), math.sin(2.0 * angle)
    return np.array([[c, s], [s, -c]], dtype=np.complex128)


class BDOrientation(enum.Enum):
    HORIZONTAL = "horizontal"  # displaces between columns l <-> r
    VERTICAL = "vertical"  # displaces between layers d <-> u


@dataclass(frozen=True)
class HWP:
    angle: float
    paths: tuple[str, ...] = PATHS

    def __post_init__(self):
        object.__setattr__(self, "paths", _check_paths(self.paths))

    def matrix(self) -> np.ndarray:
        return _polarization_op(hwp_jones(self.angle), self.paths)


@dataclass(frozen=True)
class QWP:
    """Phase-compensating quarter-wave plate; ideal propagation accrues no stray phase, so it acts trivially."""

    angle: float
    paths: tuple[str, ...] = PATHS

    def __post_init__(self):
        object.__setattr__(self, "paths", _check_paths(self.paths))

    def matrix(self) -> np.ndarray:
        return np.eye(8, dtype=np.complex128)


@dataclass(frozen=True)
class BD:
    """Lossless beam displacer.

    The `displaced` polarization is moved to the partner path (other column
    for horizontal displacers, other layer for vertical ones); the other
    polarization is transmitted. Addressed paths must come in partner pairs.
    """

    orientation: BDOrientation
    displaced: str = "H"
    paths: tuple[str, ...] = PATHS

    def __post_init__(self):
        paths = _check_paths(self.paths)
        if self.displaced not in _POL:
            raise ConfigurationError(f"displaced polarization must be H or V, got {self.displaced!r}")
        for p in paths:
            if self.partner(p) not in paths:
                raise ConfigurationError(f"{self.orientation.value} displacer on {p} needs partner path {self.partner(p)}")
        object.__setattr__(self, "paths", paths)

    def partner(self, path: str) -> str:
        if self.orientation is BDOrientation.HORIZONTAL:
            return ("r" if path[0] == "l" else "l") + path[1]
        return path[0] + ("u" if path[1] == "d" else "d")

    def matrix(self) -> np.ndarray:
        perm = np.arange(8)
        for p in self.paths:
            perm[basis_index(p, self.displaced)] = basis_index(self.partner(p), self.displaced)
        m = np.zeros((8, 8), dtype=np.complex128)
        m[perm, np.arange(8)] = 1.0
        return m


OpticalElement = HWP | QWP | BD


def _polarization_op(jones: np.ndarray, paths: Sequence[str]) -> np.ndarray:
    m = np.eye(8, dtype=np.complex128)
    for p in paths:
        h, v = basis_index(p, "H"), basis_index(p, "V")
        m[np.ix_([h, v], [h, v])] = jones
    return m


# -- states and parameters ------------------------------------------------------


@dataclass(frozen=True)
class PhotonicState:
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.asarray(self.amplitudes, dtype=np.complex128).reshape(-1)
        if v.shape != (8,):
            raise ValueError(f"photonic state needs 8 amplitudes, got {v.shape}")
        if abs(float(np.vdot(v, v).real) - 1.0) > ALGEBRA_TOL:
            raise ValueError("photonic state is not normalized")
        object.__setattr__(self, "amplitudes", v)

    @classmethod
    def single(cls, path: str, pol: str) -> "PhotonicState":
        v = np.zeros(8, dtype=np.complex128)
        v[basis_index(path, pol)] = 1.0
        return cls(v)

    def path_density(self) -> np.ndarray:
        """4x4 path operator with polarization traced out."""
        return partial_trace(projector(self.amplitudes), keep=[0, 1], dims=(2, 2, 2))


@dataclass(frozen=True)
class ExperimentParams:
    """Wave-plate-level description of one run.

    ``a, b`` are the system amplitudes on ``l`` and ``r``; ``phi_res`` sets
    the reservoir populations ``w_g = sin^2``, ``w_e = cos^2``; ``theta_ch``
    sets the damping through ``sqrt(p) = cos(theta_ch)``.
    """

    a: float
    b: float
    phi_res: float
    theta_ch: float

    def __post_init__(self):
        if abs(self.a**2 + self.b**2 - 1.0) > ALGEBRA_TOL:
            raise ValueError(f"a^2 + b^2 must equal 1, got {self.a**2 + self.b**2!r}")

    @property
    def w_g(self) -> float:
        return math.sin(self.phi_res) ** 2

    @property
    def w_e(self) -> float:
        return math.cos(self.phi_res) ** 2

    @property
    def p(self) -> float:
        return math.cos(self.theta_ch) ** 2


@dataclass(frozen=True)
class ShotConfig:
    n_shots: int
    seed: int = 0

    def __post_init__(self):
        if int(self.n_shots) < 1:
            raise ValueError(f"n_shots must be >= 1, got {self.n_shots!r}")


def param_map(initial: BlochState, r: ThermalReservoir, c: ChannelParams) -> ExperimentParams:
    """Wave-plate settings realizing `initial`, reservoir `r` and damping `c`.

    Only real amplitudes can be prepared by the half-wave plate, so states
    with a nonzero azimuth are rejected.
    """
    if initial.phi != 0.0:
        raise ValueError("the interferometer prepares real states only (phi must be 0)")
    return ExperimentParams(
        a=math.cos(initial.theta / 2.0),
        b=math.sin(initial.theta / 2.0),
        phi_res=math.acos(math.sqrt(r.w_e)),
        theta_ch=math.acos(math.sqrt(c.p)),
    )


# -- closed forms ----------------------------------------------------------------


def prepare_joint_state(x: ExperimentParams) -> np.ndarray:
    """System-reservoir state after the second beam displacer (polarization ignored)."""
    a, b = x.a, x.b
    rho_s = np.array([[a * a, a * b], [a * b, b * b]], dtype=np.complex128)
    rho_e = np.diag([x.w_g, x.w_e]).astype(np.complex128)
    return np.kron(rho_s, rho_e)


def evolved_branches(x: ExperimentParams) -> tuple[np.ndarray, np.ndarray]:
    """The two unnormalized pure branches of the evolved state, reservoir-cold first."""
    a, b = x.a, x.b
    sf, cf = math.sin(x.phi_res), math.cos(x.phi_res)
    st, ct = math.sin(x.theta_ch), math.cos(x.theta_ch)
    # amplitudes on ld, lu, rd, ru
    cold = np.array([a * sf, b * sf * ct, b * sf * st, 0.0], dtype=np.complex128)
    hot = np.array([0.0, a * cf * st, a * cf * ct, b * cf], dtype=np.complex128)
    return cold, hot


def evolve_interferometer(x: ExperimentParams) -> np.ndarray:
    cold, hot = evolved_branches(x)
    return np.outer(cold, cold.conj()) + np.outer(hot, hot.conj())


def reduced_system(rho_se) -> np.ndarray:
    return partial_trace(rho_se, keep=0, dims=(2, 2))


def reduced_env(rho_se) -> np.ndarray:
    return partial_trace(rho_se, keep=1, dims=(2, 2))


# -- element pipeline ----------------------------------------------------------------


def interferometer_elements(x: ExperimentParams) -> list[tuple[str, OpticalElement]]:
    """Ordered optical elements of the preparation and evolution stages."""
    H, V = BDOrientation.HORIZONTAL, BDOrientation.VERTICAL
    # HWP_alpha prepares a|H> + b|V> from |H>
    alpha = 0.5 * math.atan2(x.b, x.a)
    return [
        ("HWP_alpha", HWP(alpha, ("rd",))),
        ("BD1", BD(H, "H", ("ld", "rd"))),
        # both columns must leave with sin(phi)|H> + cos(phi)|V>; column l carries H, column r carries V
        ("HWP_phi_l", HWP(math.pi / 4 - x.phi_res / 2, ("ld",))),
        ("HWP_phi_r", HWP(math.pi / 2 - x.phi_res / 2, ("rd",))),
        ("BD2", BD(V, "V")),
        ("HWP_flip_in", HWP(math.pi / 4, ("lu", "ru"))),
        ("HWP_theta", HWP(math.pi / 4 - x.theta_ch / 2, ("lu", "rd"))),
        ("BD3", BD(H, "V")),
        ("BD4", BD(V, "V")),
        ("HWP_flip_out", HWP(math.pi / 4, ("lu", "ru"))),
        ("QWP", QWP(0.0)),
    ]


def propagate(state: PhotonicState, elements: Sequence[OpticalElement]) -> list[PhotonicState]:
    """States after each element, starting with the input."""
    out = [state]
    v = state.amplitudes
    for el in elements:
        v = el.matrix() @ v
        out.append(PhotonicState(v))
    return out


def element_pipeline(x: ExperimentParams) -> list[PhotonicState]:
    """Run the source photon ``|H>`` on path ``rd`` through the full interferometer."""
    elements = [el for _, el in interferometer_elements(x)]
    return propagate(PhotonicState.single("rd", "H"), elements)


def pipeline_joint_state(x: ExperimentParams) -> np.ndarray:
    return element_pipeline(x)[-1].path_density()


def projection_probability(rho_s, final: BlochState) -> float:
    """Born probability of finding `rho_s` in `final` (``l`` = g, ``r`` = e)."""
    v = bloch_ket(final)
    return clamp_probability(float(np.real(v.conj() @ np.asarray(rho_s) @ v)))


# -- shot noise --------------------------------------------------------------------------


@dataclass(frozen=True)
class ShotResult:
    counts: np.ndarray
    discarded: int
    estimates: np.ndarray
    std_errors: np.ndarray
    n_shots: int
    seed: int


def simulate_shots(probabilities: Sequence[float], s: ShotConfig, rng: np.random.Generator | None = None) -> ShotResult:
    """Multinomial counts for the given outcome probabilities.

    Any missing probability mass goes to a discard bin. Estimates are
    ``count / n`` with binomial standard errors ``sqrt(p(1-p)/n)``.
    """
    probs = np.asarray(probabilities, dtype=float)
    if np.any(probs < 0.0) or probs.sum() > 1.0 + 1e-10:
        raise ValueError("probabilities must be non-negative and sum to at most 1")
    probs = probs / max(probs.sum(), 1.0)
    residual = max(0.0, 1.0 - probs.sum())
    rng = np.random.default_rng(s.seed) if rng is None else rng
    n = int(s.n_shots)
    draw = rng.multinomial(n, np.append(probs, residual))
    counts = draw[:-1]
    est = counts / n
    return ShotResult(
        counts=counts,
        discarded=int(draw[-1]),
        estimates=est,
        std_errors=np.sqrt(est * (1.0 - est) / n),
        n_shots=n,
        seed=int(s.seed),
    )


# -- full experiments ---------------------------------------------------------------------


@dataclass(frozen=True)
class PhotonicRun:
    """Analytic and (optionally) sampled outcome of a forward/backward experiment pair."""

    p_forward: float
    p_backward: float
    ratio: float
    gamma: float
    beta_q: float
    forward_shots: ShotResult | None = None
    backward_shots: ShotResult | None = None

    @property
    def sampled(self) -> bool:
        return self.forward_shots is not None

    @property
    def p_forward_hat(self) -> float:
        return float(self.forward_shots.estimates[0])

    @property
    def p_backward_hat(self) -> float:
        return float(self.backward_shots.estimates[0])

    @property
    def gamma_hat(self) -> float:
        pb = self.p_backward_hat
        if pb == 0.0:
            return math.inf
        return self.p_forward_hat / pb * math.exp(self.beta_q)

    @property
    def gamma_std_err(self) -> float:
        pf, pb = self.p_forward_hat, self.p_backward_hat
        if pf == 0.0 or pb == 0.0:
            return math.inf
        sf = float(self.forward_shots.std_errors[0])
        sb = float(self.backward_shots.std_errors[0])
        return self.gamma_hat * math.hypot(sf / pf, sb / pb)


def photonic_probability(start: BlochState, measured: BlochState, r: ThermalReservoir, c: ChannelParams) -> float:
    """Prepare `start`, run the interferometer, project onto `measured`."""
    x = param_map(start, r, c)
    return projection_probability(reduced_system(pipeline_joint_state(x)), measured)


def run_experiment(
    initial: BlochState,
    final: BlochState,
    r: ThermalReservoir,
    c: ChannelParams,
    shots: ShotConfig | None = None,
) -> PhotonicRun:
    """Forward and backward experiments for one transition, with optional shot noise.

    The backward run prepares the time-reversed final state and projects onto
    the time-reversed initial state. Forward and backward runs draw from independent
    child streams of ``shots.seed``.
    """
    pf = photonic_probability(initial, final, r, c)
    pb = photonic_probability(time_reverse(final), time_reverse(initial), r, c)
    beta_q = r.effective_beta_delta_e * 0.5 * (math.cos(initial.theta) - math.cos(final.theta))
    if pb <= 1e-300:
        ratio = gamma = math.inf
    else:
        ratio = pf / pb
        gamma = ratio * math.exp(beta_q)
    if shots is None:
        return PhotonicRun(pf, pb, ratio, gamma, beta_q)
    fwd_seq, bwd_seq = np.random.SeedSequence(shots.seed).spawn(2)
    fwd = simulate_shots([pf, 1.0 - pf], shots, np.random.default_rng(fwd_seq))
    bwd = simulate_shots([pb, 1.0 - pb], shots, np.random.default_rng(bwd_seq))
    return PhotonicRun(pf, pb, ratio, gamma, beta_q, fwd, bwd)
