"""Grounded consensus dynamics and controllability Gramians."""

import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from herd import _kernels
from herd.errors import NotHurwitzError, NumericalError
from herd.graph import Graph

HURWITZ_TOL = 1e-10
LYAP_RESIDUAL_TOL = 1e-8


@dataclass(frozen=True)
class SystemMatrices:
    """Linear system x' = A x + B u."""

    A: np.ndarray
    B: np.ndarray
    herding_node: int | None = None

    def __post_init__(self):
        A = np.asarray(self.A, dtype=float)
        B = np.asarray(self.B, dtype=float)
        if B.ndim == 1:
            B = B[:, None]
        if A.ndim != 2 or A.shape[0] != A.shape[1] or B.shape[0] != A.shape[0]:
            raise ValueError(f"incompatible shapes A{A.shape}, B{B.shape}")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)

    @property
    def n(self) -> int:
        return self.A.shape[0]


@dataclass(frozen=True)
class Gramian:
    W: np.ndarray
    horizon: float = math.inf
    residual: float | None = None

    def lyapunov_residual(self, sys: SystemMatrices) -> float:
        A, B = sys.A, sys.B
        return float(np.linalg.norm(A @ self.W + self.W @ A.T + B @ B.T))


def taylor_consensus(g: Graph, herding_node: int) -> SystemMatrices:
    """Consensus over in-neighbours with a grounding term at the herding node.

    Row j of A is sum_{k in N_j} w_kj (x_k - x_j); the herding node gets an
    extra -x_i and receives the input.
    """
    if not 0 <= herding_node < g.n:
        raise ValueError(f"herding node {herding_node} outside 0..{g.n - 1}")
    Wm = g.adjacency(weighted=True)
    A = Wm.T - np.diag(Wm.sum(axis=0))
    A[herding_node, herding_node] -= 1.0
    B = np.zeros((g.n, 1))
    B[herding_node, 0] = 1.0
    return SystemMatrices(A, B, herding_node)


def spectral_abscissa(A: np.ndarray) -> float:
    try:
        ev = np.linalg.eigvals(A)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigenvalue iteration failed: {exc}") from exc
    return float(ev.real.max())


def is_hurwitz(A: np.ndarray, tol: float = HURWITZ_TOL) -> tuple[bool, float]:
    a = spectral_abscissa(np.asarray(A, dtype=float))
    return a < -tol, a


def default_horizon(A: np.ndarray) -> float:
    """Finite stand-in for t_f = inf: 40 time constants of the slowest mode."""
    ok, a = is_hurwitz(A)
    if not ok:
        raise NotHurwitzError(a)
    return 40.0 / abs(a)


def lyapunov_gramian(sys: SystemMatrices) -> Gramian:
    """Infinite-horizon Gramian from A W + W A^T + B B^T = 0 (Bartels-Stewart)."""
    ok, a = is_hurwitz(sys.A)
    if not ok:
        raise NotHurwitzError(a)
    A = sys.A
    Q = sys.B @ sys.B.T
    qnorm = np.linalg.norm(Q)
    if qnorm == 0:
        return Gramian(np.zeros_like(A), math.inf, 0.0)
    W = scipy.linalg.solve_continuous_lyapunov(A, -Q)
    W = 0.5 * (W + W.T)
    res = np.linalg.norm(A @ W + W @ A.T + Q)
    if res > LYAP_RESIDUAL_TOL * qnorm:
        # one step of iterative refinement on the residual equation
        R = A @ W + W @ A.T + Q
        dW = scipy.linalg.solve_continuous_lyapunov(A, -R)
        W = W + 0.5 * (dW + dW.T)
        res = np.linalg.norm(A @ W + W @ A.T + Q)
        if res > LYAP_RESIDUAL_TOL * qnorm:
            warnings.warn(f"ill-conditioned Lyapunov solve: residual {res:.3g} "
                          f"vs ||BB^T|| {qnorm:.3g}", RuntimeWarning, stacklevel=2)
    return Gramian(W, math.inf, float(res))


def finite_horizon_gramian(sys: SystemMatrices, t_f: float, W_inf: Gramian | None = None) -> Gramian:
    """W(t_f) = W_inf - e^{A t_f} W_inf e^{A^T t_f}, valid for Hurwitz A."""
    if W_inf is None:
        W_inf = lyapunov_gramian(sys)
    E = scipy.linalg.expm(sys.A * t_f)
    W = W_inf.W - E @ W_inf.W @ E.T
    return Gramian(0.5 * (W + W.T), float(t_f))


def finite_gramian_quadrature(sys: SystemMatrices, t_f: float, steps: int | None = None,
                              order: int = 10) -> Gramian:
    """Integrate e^{A t} B B^T e^{A^T t} over [0, t_f] by composite Gauss-Legendre.

    ``steps`` is the number of equal panels, each using an ``order``-point rule.
    By default panels are short enough that ``h * rho(A) <= 2``.  The state
    transition over a panel is taken from a matrix exponential, so no error
    accumulates from propagation.
    """
    if t_f < 0 or not math.isfinite(t_f):
        raise ValueError("t_f must be a finite nonnegative number")
    A, B = sys.A, sys.B
    if t_f == 0:
        return Gramian(np.zeros_like(A), 0.0)
    if steps is None:
        rho = float(np.abs(np.linalg.eigvals(A)).max()) if A.size else 0.0
        steps = max(100, math.ceil(t_f * rho / 2.0))
    if steps < 100:
        raise ValueError("steps must be at least 100")
    h = t_f / steps
    x, w = np.polynomial.legendre.leggauss(order)
    offsets = 0.5 * h * (x + 1.0)
    weights = 0.5 * h * w
    E_nodes = np.stack([scipy.linalg.expm(A * s) for s in offsets])
    E_panel = scipy.linalg.expm(A * h)
    W = _kernels.gl_gramian_accumulate(E_panel, E_nodes, weights, np.ascontiguousarray(B), steps)
    return Gramian(0.5 * (W + W.T), float(t_f))
