"""Bloch-sphere states, thermal reservoirs, coherence and heat.

Energies follow the ``E_g = 0`` convention, so the system Hamiltonian is
``diag(0, delta_e)``. Temperatures enter only as the dimensionless product
``beta_delta_e``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .linalg import ket, projector

#: beta * Delta E values above this are treated as zero temperature
BETA_DELTA_E_CAP = 700.0


def wrap_phase(phi: float) -> float:
    """Map an angle into ``[-pi, pi)``; values already inside are returned unchanged."""
    if -math.pi <= phi < math.pi:
        return phi
    wrapped = (phi + math.pi) % (2.0 * math.pi) - math.pi
    # float rounding can land exactly on +pi
    return -math.pi if wrapped >= math.pi else wrapped


@dataclass(frozen=True)
class BlochState:
    """Pure qubit ``cos(theta/2)|g> + exp(i phi) sin(theta/2)|e>``."""

    theta: float
    phi: float = 0.0

    def __post_init__(self):
        theta = float(self.theta)
        if not (0.0 <= theta <= math.pi) or math.isnan(theta):
            raise ValueError(f"theta must lie in [0, pi], got {theta!r}")
        if not math.isfinite(self.phi):
            raise ValueError(f"phi must be finite, got {self.phi!r}")
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "phi", wrap_phase(float(self.phi)))

    @property
    def coherence(self) -> float:
        return math.sin(self.theta)

    def orthogonal(self) -> "BlochState":
        """The antipodal state on the Bloch sphere."""
        return BlochState(math.pi - self.theta, self.phi + math.pi)


@dataclass(frozen=True)
class ThermalReservoir:
    """Gibbs qubit populations at inverse temperature ``beta_delta_e``.

    Inputs above :data:`BETA_DELTA_E_CAP` (including ``inf``) are treated as
    the zero-temperature limit and flagged with ``capped``.
    """

    beta_delta_e: float
    capped: bool = field(init=False, default=False)

    def __post_init__(self):
        b = float(self.beta_delta_e)
        if math.isnan(b) or b < 0.0:
            raise ValueError(f"beta_delta_e must be >= 0, got {b!r}")
        if b > BETA_DELTA_E_CAP:
            object.__setattr__(self, "capped", True)
        object.__setattr__(self, "beta_delta_e", b)

    @property
    def effective_beta_delta_e(self) -> float:
        """Value used in exponentials; clipped to the cap."""
        return min(self.beta_delta_e, BETA_DELTA_E_CAP)

    @property
    def w_e(self) -> float:
        if self.capped:
            return 0.0
        x = math.exp(-self.beta_delta_e)
        return x / (1.0 + x)

    @property
    def w_g(self) -> float:
        if self.capped:
            return 1.0
        return 1.0 / (1.0 + math.exp(-self.beta_delta_e))


@dataclass(frozen=True)
class EnergySpec:
    delta_e: float = 1.0
    e_ground: float = 0.0

    def __post_init__(self):
        if not self.delta_e > 0.0:
            raise ValueError(f"delta_e must be > 0, got {self.delta_e!r}")

    def hamiltonian(self) -> np.ndarray:
        return np.diag([self.e_ground, self.e_ground + self.delta_e]).astype(np.complex128)


class CoherenceBranch(enum.Enum):
    """Which half of the Bloch sphere a coherence value is mapped to."""

    LOWER = "lower"  # theta in [0, pi/2]
    UPPER = "upper"  # theta in (pi/2, pi]


def bloch_ket(s: BlochState) -> np.ndarray:
    return ket([math.cos(s.theta / 2.0), np.exp(1j * s.phi) * math.sin(s.theta / 2.0)])


def bloch_density(s: BlochState) -> np.ndarray:
    return projector(bloch_ket(s))


def time_reverse(s: BlochState) -> BlochState:
    """Conjugate the relative phase; energy eigenstates are left invariant."""
    return BlochState(s.theta, -s.phi)


def thermal_state(r: ThermalReservoir) -> np.ndarray:
    return np.diag([r.w_g, r.w_e]).astype(np.complex128)


def coherence_l1(rho) -> float:
    """l1-norm of coherence: sum of absolute off-diagonal entries."""
    rho = np.asarray(rho)
    off = ~np.eye(rho.shape[0], dtype=bool)
    return float(np.sum(np.abs(rho[off])))


def theta_from_coherence(c: float, branch: CoherenceBranch) -> float:
    """Polar angle with ``sin(theta) = c`` on the requested hemisphere."""
    if not (0.0 <= c <= 1.0):
        raise ValueError(f"coherence must lie in [0, 1], got {c!r}")
    theta = math.asin(c)
    return theta if branch is CoherenceBranch.LOWER else math.pi - theta


def thetas_from_coherence(c, branch: CoherenceBranch) -> np.ndarray:
    """Vectorized :func:`theta_from_coherence`."""
    c = np.asarray(c, dtype=float)
    if np.any((c < 0.0) | (c > 1.0)):
        raise ValueError("coherence must lie in [0, 1]")
    theta = np.arcsin(c)
    return theta if branch is CoherenceBranch.LOWER else np.pi - theta


def heat(initial: BlochState, final: BlochState, e: EnergySpec = EnergySpec()) -> float:
    """Heat absorbed by the system, ``delta_e (cos theta_i - cos theta_f) / 2``."""
    return 0.5 * e.delta_e * (math.cos(initial.theta) - math.cos(final.theta))
