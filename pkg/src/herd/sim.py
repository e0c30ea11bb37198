"""Trajectory integration used to check the energy pipeline end to end."""

import math
from dataclasses import dataclass, field

import numpy as np

from herd import _kernels
from herd.dynamics import SystemMatrices, default_horizon, lyapunov_gramian, taylor_consensus
from herd.energy import ControlSignal, min_energy_to_orthant, spectrum, synthesize_control
from herd.errors import NumericalError
from herd.graph import Graph

MARGIN_TOL = 1e-3
ENERGY_RATIO_BOUNDS = (0.99, 1.02)


@dataclass(frozen=True)
class Trajectory:
    t: np.ndarray
    x: np.ndarray
    u: np.ndarray
    energy: float

    @property
    def x_final(self) -> np.ndarray:
        return self.x[-1]


@dataclass(frozen=True)
class VerificationRecord:
    herding_node: int
    d: float
    t_f: float
    h: float
    predicted_energy: float
    realized_energy: float
    margin: float
    passed: bool
    x_final: np.ndarray
    trajectory: Trajectory | None = field(default=None, repr=False)

    @property
    def energy_ratio(self) -> float:
        return self.realized_energy / self.predicted_energy


def auto_step(A: np.ndarray, t_f: float) -> float:
    """Largest step with h <= t_f / 1000 and h * rho(A) <= 0.1."""
    rho = float(np.abs(np.linalg.eigvals(A)).max())
    h = t_f / 1000
    if rho > 0:
        h = min(h, 0.1 / rho)
    return t_f / math.ceil(t_f / h)


def integrate(sys: SystemMatrices, control, t_f: float, h: float | None = None,
              x0=None) -> Trajectory:
    """RK4 with a fixed step on [0, t_f].

    ``control`` is a :class:`ControlSignal` (sampled in one pass) or any
    callable ``u(t)`` returning an m-vector.  ``h`` must divide into at least
    1000 steps; it is nudged so the grid ends exactly at ``t_f``.
    """
    if not t_f > 0:
        raise ValueError("t_f must be positive")
    if h is None:
        h = auto_step(sys.A, t_f)
    if h > t_f / 1000 * (1 + 1e-12):
        raise ValueError(f"step {h} too coarse; need h <= t_f/1000 = {t_f / 1000}")
    steps = max(1000, round(t_f / h))
    h = t_f / steps
    if isinstance(control, ControlSignal):
        U = control.sample(2 * steps)
    else:
        ts = np.linspace(0.0, t_f, 2 * steps + 1)
        U = np.array([np.atleast_1d(control(t)) for t in ts], dtype=float).reshape(ts.size, -1)
    x0 = np.zeros(sys.n) if x0 is None else np.asarray(x0, dtype=float)
    X, bad = _kernels.rk4_linear(sys.A, sys.B, np.ascontiguousarray(U), h, x0)
    if bad >= 0:
        raise NumericalError(f"state became nonfinite at t = {bad * h:.6g}")
    sq = np.einsum("ij,ij->i", U, U)
    energy = float(h / 6.0 * np.sum(sq[0:-1:2] + 4.0 * sq[1::2] + sq[2::2]))
    t = np.linspace(0.0, t_f, steps + 1)
    return Trajectory(t, X, U[::2], energy)


def verify_herding(g: Graph, herding_node: int, d: float = 1.0, t_f: float | None = None,
                   h: float | None = None, rank_eps: float | None = None) -> VerificationRecord:
    """Drive the grounded consensus system from 0 into {x >= d} and audit the result."""
    sys = taylor_consensus(g, herding_node)
    W = lyapunov_gramian(sys)
    spec = spectrum(W, rank_eps)
    res = min_energy_to_orthant(spec, d)
    if t_f is None:
        t_f = default_horizon(sys.A)
    signal = synthesize_control(sys, spec, res.x_f, t_f)
    traj = integrate(sys, signal, t_f, h)
    margin = float(traj.x_final.min() - d)
    ratio = traj.energy / res.J
    lo, hi = ENERGY_RATIO_BOUNDS
    passed = margin >= -MARGIN_TOL * d and lo <= ratio <= hi
    return VerificationRecord(herding_node, float(d), float(t_f), float(traj.t[1] - traj.t[0]),
                              res.J, traj.energy, margin, passed, traj.x_final, traj)
