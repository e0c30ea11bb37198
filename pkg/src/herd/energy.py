"""Minimum control energy to enter the shifted orthant {x : x_i >= d}.

With the Gramian eigenpairs (lambda_i, v_i) spanning its range, the cheapest
reachable target is found from the reduced problem

    minimize    sum_i alpha_i**2 / lambda_i
    subject to  V alpha >= d

and the minimum energy to hit a given point x_f is x_f^T W^+ x_f.
"""

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.optimize

from herd import _kernels
from herd.dynamics import Gramian, SystemMatrices, finite_horizon_gramian
from herd.errors import InfeasibleError, NumericalError, OutOfRangeError

RANK_EPS_PER_NODE = 1e-9
PHASE1_TOL = 1e-8
RANGE_TOL = 1e-6


@dataclass(frozen=True)
class GramianSpectrum:
    """Eigenpairs of a symmetric PSD Gramian, eigenvalues in descending order."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    rank: int
    cutoff: float

    @property
    def lam(self) -> np.ndarray:
        return self.eigenvalues[: self.rank]

    @property
    def V(self) -> np.ndarray:
        return self.eigenvectors[:, : self.rank]

    @property
    def n(self) -> int:
        return self.eigenvectors.shape[0]


@dataclass(frozen=True)
class EnergyResult:
    J: float
    x_f: np.ndarray
    alpha: np.ndarray
    d: float
    active_set: tuple
    multipliers: np.ndarray = field(repr=False)
    iterations: int = 0


def spectrum(W, rank_eps: float | None = None) -> GramianSpectrum:
    """Symmetric eigendecomposition with a relative rank cutoff.

    Eigenvalues above ``rank_eps * lambda_1`` count toward the rank; the
    default ``rank_eps`` is ``1e-9 * n``.  Each eigenvector is oriented so its
    largest-magnitude entry is positive.
    """
    W = W.W if isinstance(W, Gramian) else np.asarray(W, dtype=float)
    n = W.shape[0]
    if rank_eps is None:
        rank_eps = RANK_EPS_PER_NODE * n
    lam, vec = np.linalg.eigh(0.5 * (W + W.T))
    lam, vec = lam[::-1].copy(), vec[:, ::-1].copy()
    pivot = np.argmax(np.abs(vec), axis=0)
    signs = np.sign(vec[pivot, np.arange(n)])
    signs[signs == 0] = 1.0
    vec *= signs
    top = lam[0] if n else 0.0
    if top <= 0:
        return GramianSpectrum(lam, vec, 0, 0.0)
    cutoff = rank_eps * top
    rank = int(np.count_nonzero(lam > cutoff))
    return GramianSpectrum(lam, vec, rank, float(cutoff))


def _phase1(V, d):
    """Feasibility LP: maximize s s.t. V a >= s, |a_i| <= 1, s <= 1.

    Returns a feasible alpha for V alpha >= d, or raises InfeasibleError.
    """
    n, r = V.shape
    c = np.zeros(r + 1)
    c[-1] = -1.0
    A_ub = np.hstack([-V, np.ones((n, 1))])
    b_ub = np.zeros(n)
    bounds = [(-1.0, 1.0)] * r + [(None, 1.0)]
    res = scipy.optimize.linprog(c, A_ub=A_ub, b_ub=b_ub, bounds=bounds, method="highs")
    if res.status != 0:
        raise NumericalError(f"phase-1 LP failed: {res.message}")
    s = -res.fun
    if s <= PHASE1_TOL:
        y = np.abs(res.ineqlin.marginals)
        y = y / y.sum() if y.sum() > 0 else y
        raise InfeasibleError(
            f"terminal orthant does not meet range(W): phase-1 margin {s:.3g}",
            phase1_value=-s, certificate=y)
    a = res.x[:r] * (d / s)
    # guard against LP tolerance leaving a hair of infeasibility
    worst = (V @ a).min()
    if worst < d:
        a *= d / worst
    return a


def _warm_guesses(M, d):
    """Closed-form feasible candidates in scaled coordinates, cheapest first."""
    cands = []
    dirs = [M.T @ np.ones(M.shape[0])] + [M[k] for k in range(M.shape[0])]
    for g in dirs:
        proj = M @ g
        lo = proj.min()
        if lo > 0:
            cands.append(g * (d / lo))
    cands.sort(key=lambda b: float(b @ b))
    return cands


def _working_set_point(M, work, d):
    """Min-norm b with M[work] b = d, and its multipliers, via QR of M[work]^T."""
    Q, R = np.linalg.qr(M[work].T)
    y = scipy.linalg.solve_triangular(R, np.full(len(work), d), trans="T")
    nu = scipy.linalg.solve_triangular(R, y)
    return Q @ y, nu


def _active_set_min_norm(M, d, beta, max_iter):
    """Primal active-set for min 0.5||b||^2 s.t. M b >= d, from feasible ``beta``.

    Returns (beta, working set, multipliers on the working set, iterations).
    """
    n = M.shape[0]
    row_norms = np.linalg.norm(M, axis=1)
    work: list[int] = []
    scale = max(1.0, float(np.linalg.norm(beta)))
    at_min = False
    for it in range(1, max_iter + 1):
        if work:
            target, nu = _working_set_point(M, work, d)
        else:
            target, nu = np.zeros_like(beta), np.zeros(0)
        p = target - beta
        if at_min or np.linalg.norm(p) <= 1e-12 * scale:
            if nu.size == 0 or nu.min() >= -1e-9 * np.abs(nu).max():
                return beta, work, nu, it
            # Bland-style smallest index once degenerate cycling becomes possible
            neg = np.flatnonzero(nu < 0)
            drop = int(np.argmin(nu)) if it < 10 * n else int(neg[np.argmin(np.array(work)[neg])])
            del work[drop]
            at_min = False
            continue
        Mp = M @ p
        slack = M @ beta - d
        step = 1.0
        block = -1
        in_work = np.zeros(n, dtype=bool)
        in_work[work] = True
        # rows nearly orthogonal to p cannot block; this also keeps the working set independent
        descending = Mp < -1e-10 * row_norms * np.linalg.norm(p)
        for k in np.flatnonzero(descending & ~in_work):
            ratio = max(slack[k], 0.0) / -Mp[k]
            if ratio < step:
                step = ratio
                block = int(k)
        if block >= 0:
            beta = beta + step * p
            work.append(block)
        else:
            beta = target
            at_min = True
    raise NumericalError(f"active-set QP did not converge in {max_iter} iterations")


def min_energy_to_orthant(spec: GramianSpectrum, d: float = 1.0,
                          max_iter: int | None = None) -> EnergyResult:
    """Cheapest terminal state in {x >= d} reachable from the origin.

    Runs a phase-1 feasibility LP, then a primal active-set method on the
    r-dimensional reduced problem in the scaled variable b = alpha / sqrt(lambda),
    where the objective becomes ||b||^2.
    """
    if not d > 0:
        raise ValueError("d must be positive")
    r = spec.rank
    if r == 0:
        raise InfeasibleError("Gramian has rank 0; nothing is reachable from the origin",
                              phase1_value=d)
    V, lam = spec.V, spec.lam
    sq = np.sqrt(lam)
    M = V * sq
    a0 = _phase1(V, d)
    beta0 = a0 / sq
    guesses = _warm_guesses(M, d)
    if guesses and guesses[0] @ guesses[0] < beta0 @ beta0:
        beta0 = guesses[0]
    if max_iter is None:
        max_iter = 100 * spec.n
    beta, work, nu, iters = _active_set_min_norm(M, d, beta0, max_iter)
    alpha = sq * beta
    x_f = V @ alpha
    mu = np.zeros(spec.n)
    mu[work] = 2.0 * nu
    tight = np.flatnonzero(x_f - d <= 1e-9 * max(1.0, d))
    return EnergyResult(float(beta @ beta), x_f, alpha, float(d), tuple(int(k) for k in tight),
                        mu, iters)


def kkt_residuals(spec: GramianSpectrum, res: EnergyResult) -> dict:
    """Relative KKT residuals of a reduced-QP solution."""
    V, lam = spec.V, spec.lam
    grad = 2.0 * res.alpha / lam
    scale = max(1.0, float(np.linalg.norm(grad)))
    slack = V @ res.alpha - res.d
    return {
        "stationarity": float(np.linalg.norm(grad - V.T @ res.multipliers)) / scale,
        "primal": float(max(0.0, -slack.min())) / res.d,
        "dual": float(max(0.0, -res.multipliers.min())) / scale,
        "complementarity": float(np.abs(res.multipliers * slack).max()) / (scale * res.d),
    }


def _range_coords(spec, x):
    x = np.asarray(x, dtype=float)
    c = spec.V.T @ x
    resid = float(np.linalg.norm(x - spec.V @ c))
    if resid > RANGE_TOL * max(1.0, float(np.linalg.norm(x))):
        raise OutOfRangeError(resid)
    return c


def min_energy_to_point(spec: GramianSpectrum, x_f) -> float:
    """x_f^T W^+ x_f evaluated in the eigenbasis."""
    c = _range_coords(spec, x_f)
    return float(np.sum(c * c / spec.lam)) if spec.rank else 0.0


class ControlSignal:
    """Open-loop input u(t) = B^T exp(A^T (t_f - t)) p on [0, t_f]."""

    def __init__(self, A, B, p, t_f, energy):
        self.A = A
        self.B = B
        self.p = p
        self.t_f = float(t_f)
        self.energy = float(energy)

    def __call__(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.empty((t.size, self.B.shape[1]))
        for k, tk in enumerate(t):
            out[k] = self.B.T @ (scipy.linalg.expm(self.A.T * (self.t_f - tk)) @ self.p)
        return out

    def sample(self, count: int) -> np.ndarray:
        """Values at the ``count + 1`` points of a uniform grid over [0, t_f]."""
        E = scipy.linalg.expm(self.A.T * (self.t_f / count))
        Z = _kernels.backward_propagate(E, self.p, count)
        return Z @ self.B


def synthesize_control(sys: SystemMatrices, W: Gramian | GramianSpectrum, x_f,
                       t_f: float) -> ControlSignal:
    """Minimum-energy input that reaches ``x_f`` at time ``t_f`` from the origin.

    ``W`` is the infinite-horizon Gramian (or its spectrum); the finite
    Gramian at ``t_f`` shares its range, so p solves W(t_f) p = x_f within
    that range.
    """
    if not t_f > 0 or not math.isfinite(t_f):
        raise ValueError("t_f must be positive and finite")
    spec = W if isinstance(W, GramianSpectrum) else spectrum(W)
    x_f = np.asarray(x_f, dtype=float)
    if not np.any(x_f):
        return ControlSignal(sys.A, sys.B, np.zeros(sys.n), t_f, 0.0)
    c = _range_coords(spec, x_f)
    W_inf = Gramian(spec.V @ np.diag(spec.lam) @ spec.V.T) if isinstance(W, GramianSpectrum) else W
    Wt = finite_horizon_gramian(sys, t_f, W_inf).W
    V = spec.V
    coef = np.linalg.solve(V.T @ Wt @ V, c)
    p = V @ coef
    return ControlSignal(sys.A, sys.B, p, t_f, float(c @ coef))
