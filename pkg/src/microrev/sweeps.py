"""Parameter sweeps over coherence and temperature, and extremum search."""

from __future__ import annotations

import enum
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from . import channel
from .channel import ChannelParams
from .states import BlochState, CoherenceBranch, ThermalReservoir, thetas_from_coherence


class Regime(enum.Enum):
    """Hemisphere assignment for (theta_i, theta_f) along coherence sweeps."""

    HEAT_RELEASE = "release"  # theta_i in [pi/2, pi], theta_f in [0, pi/2]
    HEAT_ABSORB = "absorb"  # theta_i in [0, pi/2], theta_f in [pi/2, pi]

    @property
    def branches(self) -> tuple[CoherenceBranch, CoherenceBranch]:
        if self is Regime.HEAT_RELEASE:
            return CoherenceBranch.UPPER, CoherenceBranch.LOWER
        return CoherenceBranch.LOWER, CoherenceBranch.UPPER

    def thetas(self, c_i, c_f) -> tuple[np.ndarray, np.ndarray]:
        bi, bf = self.branches
        return thetas_from_coherence(c_i, bi), thetas_from_coherence(c_f, bf)


class ExtremumKind(enum.Enum):
    MIN = "min"
    MAX = "max"


@dataclass(frozen=True)
class SweepGrid:
    beta_delta_e: float
    p: float = 0.5
    n_i: int = 201
    n_f: int = 201
    phi_i: float = 0.0
    phi_f: float = 0.0

    def __post_init__(self):
        if self.n_i < 2 or self.n_f < 2:
            raise ValueError("grids need at least 2 points per axis")
        ThermalReservoir(self.beta_delta_e)
        ChannelParams(self.p)


class Table:
    """Column-oriented result table with a fixed column order."""

    def __init__(self, columns: dict[str, np.ndarray]):
        lengths = {len(v) for v in columns.values()}
        if len(lengths) > 1:
            raise ValueError(f"ragged columns: {lengths}")
        self.columns = {k: np.asarray(v) for k, v in columns.items()}

    @property
    def names(self) -> list[str]:
        return list(self.columns)

    def __getitem__(self, name: str) -> np.ndarray:
        return self.columns[name]

    def __len__(self) -> int:
        return len(next(iter(self.columns.values()))) if self.columns else 0

    def rows(self) -> Iterator[tuple]:
        return zip(*self.columns.values())


MAP_COLUMNS = ("c_i", "c_f", "theta_i", "theta_f", "p_forward", "p_backward", "ratio", "q_over_de", "gamma", "diverged")


def _numeric_row(args) -> list[tuple[float, ...]]:
    thetas_i, theta_f_row, phi_i, phi_f, p, beta = args
    c, r = ChannelParams(p), ThermalReservoir(beta)
    out = []
    for th_i, th_f in zip(thetas_i, theta_f_row):
        rep = channel.deviation_factor(BlochState(th_i, phi_i), BlochState(th_f, phi_f), c, r, numeric=True)
        out.append((rep.p_forward, rep.p_backward, rep.ratio, rep.q_heat, rep.deviation, rep.diverged))
    return out


def gamma_map(g: SweepGrid, regime: Regime, method: str = "closed", workers: int | None = None) -> Table:
    """Deviation factor over a uniform ``(C_i, C_f)`` grid, endpoints included.

    Rows are ordered with ``C_i`` as the slow index. ``method="numeric"``
    evaluates every cell by explicit traces; rows are then independent work
    units and may be spread over `workers` processes without changing the
    output order.
    """
    c_i = np.linspace(0.0, 1.0, g.n_i)
    c_f = np.linspace(0.0, 1.0, g.n_f)
    CI, CF = np.meshgrid(c_i, c_f, indexing="ij")
    TI, TF = regime.thetas(CI, CF)
    r = ThermalReservoir(g.beta_delta_e)

    if method == "closed":
        res = channel.deviation_arrays(TI, TF, g.phi_i - g.phi_f, g.p, r)
        cols = {k: res[k].ravel() for k in ("p_forward", "p_backward", "ratio", "q_over_de", "gamma", "diverged")}
    elif method == "numeric":
        jobs = [(TI[k], TF[k], g.phi_i, g.phi_f, g.p, g.beta_delta_e) for k in range(g.n_i)]
        if workers and workers > 1:
            with ProcessPoolExecutor(workers) as ex:
                rows = list(ex.map(_numeric_row, jobs))
        else:
            rows = [_numeric_row(j) for j in jobs]
        flat = np.array([cell for row in rows for cell in row], dtype=float)
        cols = {
            "p_forward": flat[:, 0],
            "p_backward": flat[:, 1],
            "ratio": flat[:, 2],
            "q_over_de": flat[:, 3],
            "gamma": flat[:, 4],
            "diverged": flat[:, 5].astype(bool),
        }
    else:
        raise ValueError(f"unknown method {method!r}")

    return Table({"c_i": CI.ravel(), "c_f": CF.ravel(), "theta_i": TI.ravel(), "theta_f": TF.ravel(), **cols})


def gamma_at(c_i, c_f, beta_delta_e: float, p: float, regime: Regime, dphi: float = 0.0) -> np.ndarray:
    """Deviation factor at arbitrary coherence coordinates (broadcasting)."""
    ti, tf = regime.thetas(c_i, c_f)
    return channel.deviation_arrays(ti, tf, dphi, p, ThermalReservoir(beta_delta_e))["gamma"]


# -- extremum search -------------------------------------------------------------


@dataclass(frozen=True)
class ExtremumResult:
    c_i_star: float
    c_f_star: float
    gamma_star: float
    kind: ExtremumKind
    refinement_residual: float
    history: tuple[float, ...] = ()


def _gradient_norm(f, x: float, y: float, h: float = 1e-6) -> float:
    """Central-difference gradient magnitude; one-sided on the unit-square boundary."""
    def diff(u, axis):
        lo, hi = max(u - h, 0.0), min(u + h, 1.0)
        if axis == 0:
            return (f(hi, y) - f(lo, y)) / (hi - lo)
        return (f(x, hi) - f(x, lo)) / (hi - lo)

    return math.hypot(diff(x, 0), diff(y, 1))


def find_extremum(
    beta_delta_e: float,
    p: float,
    regime: Regime,
    n_coarse: int = 201,
    rounds: int = 6,
    shrink: int = 10,
    dphi: float = 0.0,
) -> ExtremumResult:
    """Locate the minimum (release) or maximum (absorb) of the deviation factor.

    A coarse ``n_coarse x n_coarse`` scan of the unit square is followed by
    `rounds` of local grids centred on the incumbent; each round spans plus
    or minus the previous spacing and shrinks the spacing by `shrink`.
    """
    n_local = 2 * shrink + 1
    kind = ExtremumKind.MIN if regime is Regime.HEAT_RELEASE else ExtremumKind.MAX
    sign = 1.0 if kind is ExtremumKind.MIN else -1.0

    def objective(ci, cf):
        return sign * gamma_at(ci, cf, beta_delta_e, p, regime, dphi)

    axis = np.linspace(0.0, 1.0, n_coarse)
    CI, CF = np.meshgrid(axis, axis, indexing="ij")
    vals = objective(CI, CF)
    k = int(np.argmin(vals))
    best_x, best_y, best = float(CI.flat[k]), float(CF.flat[k]), float(vals.flat[k])
    history = [sign * best]

    spacing = 1.0 / (n_coarse - 1)
    for _ in range(rounds):
        xs = np.clip(np.linspace(best_x - spacing, best_x + spacing, n_local), 0.0, 1.0)
        ys = np.clip(np.linspace(best_y - spacing, best_y + spacing, n_local), 0.0, 1.0)
        X, Y = np.meshgrid(xs, ys, indexing="ij")
        vals = objective(X, Y)
        k = int(np.argmin(vals))
        if vals.flat[k] < best:
            best_x, best_y, best = float(X.flat[k]), float(Y.flat[k]), float(vals.flat[k])
        history.append(sign * best)
        spacing /= shrink

    residual = _gradient_norm(lambda a, b: float(objective(a, b)), best_x, best_y)
    return ExtremumResult(best_x, best_y, sign * best, kind, residual, tuple(history))


# -- curves -----------------------------------------------------------------------


@dataclass(frozen=True)
class TransitionCase:
    name: str
    initial: BlochState
    final: BlochState


#: the three transitions of the temperature-dependence experiment
CASES = {
    "classical": TransitionCase("classical", BlochState(0.0), BlochState(math.pi)),
    "coherent-excited": TransitionCase("coherent-excited", BlochState(math.pi / 2), BlochState(math.pi)),
    "coherent-coherent": TransitionCase("coherent-coherent", BlochState(math.pi / 2), BlochState(2 * math.pi / 3)),
}
CASE_ALIASES = {"1": "classical", "2": "coherent-excited", "3": "coherent-coherent"}


def resolve_case(name: str) -> TransitionCase:
    key = CASE_ALIASES.get(str(name), str(name))
    try:
        return CASES[key]
    except KeyError:
        raise ValueError(f"unknown case {name!r}; choose from {sorted(CASES) + sorted(CASE_ALIASES)}") from None


def gamma_curve(case: TransitionCase | str, beta_values, p: float = 0.5) -> Table:
    """Deviation factor against ``beta_delta_e`` for one transition pair."""
    case = resolve_case(case) if isinstance(case, str) else case
    betas = np.asarray(beta_values, dtype=float)
    c = ChannelParams(p)
    reports = [channel.deviation_factor(case.initial, case.final, c, ThermalReservoir(b)) for b in betas]
    return Table(
        {
            "beta_delta_e": betas,
            "p_forward": np.array([r.p_forward for r in reports]),
            "p_backward": np.array([r.p_backward for r in reports]),
            "ratio": np.array([r.ratio for r in reports]),
            "gamma": np.array([r.deviation for r in reports]),
            "diverged": np.array([r.diverged for r in reports]),
        }
    )


def diagonal_cut(beta_delta_e: float, p: float, regime: Regime, n_points: int = 101, dphi: float = 0.0) -> Table:
    """Deviation factor along ``C_i = C_f = C``."""
    if n_points < 2:
        raise ValueError("n_points must be >= 2")
    cs = np.linspace(0.0, 1.0, n_points)
    ti, tf = regime.thetas(cs, cs)
    res = channel.deviation_arrays(ti, tf, dphi, p, ThermalReservoir(beta_delta_e))
    return Table({"c": cs, "theta_i": ti, "theta_f": tf, "gamma": res["gamma"], "diverged": res["diverged"]})
