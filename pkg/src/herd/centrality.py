"""Herdability centrality and the classical centralities it is compared against."""

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from herd import _kernels
from herd.dynamics import lyapunov_gramian, taylor_consensus
from herd.energy import min_energy_to_orthant, spectrum
from herd.errors import NumericalError
from herd.graph import Graph, degrees, is_strongly_connected

MEASURES = ("indegree", "eccentricity", "closeness", "betweenness", "eigenvector", "katz")
KATZ_DEFAULT_FRACTION = 0.85
TIE_RTOL = 1e-9


class NotStronglyConnectedError(ValueError):
    def __init__(self):
        super().__init__("graph is not strongly connected; extract the largest SCC first "
                         "(herd.graph.largest_scc)")


@dataclass(frozen=True)
class HerdabilityCentralityReport:
    J: np.ndarray
    Hc: np.ndarray
    argmin: tuple
    d: float
    horizon: str = "infinite"
    errors: dict = field(default_factory=dict)

    @property
    def partial(self) -> bool:
        return bool(self.errors)


@dataclass(frozen=True)
class ClassicCentralityReport:
    measure: str
    scores: np.ndarray
    params: dict = field(default_factory=dict)


def default_jobs() -> int:
    env = os.environ.get("HERD_JOBS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def node_energy(g: Graph, node: int, d: float = 1.0, rank_eps: float | None = None) -> float:
    """Minimum energy to herd ``g`` into {x >= d} with ``node`` as the only input."""
    sys = taylor_consensus(g, node)
    spec = spectrum(lyapunov_gramian(sys), rank_eps)
    return min_energy_to_orthant(spec, d).J


def herdability_centrality(g: Graph, d: float = 1.0, jobs: int | None = None,
                           rank_eps: float | None = None) -> HerdabilityCentralityReport:
    """Hc_i = min_k J_k / J_i over a strongly connected graph.

    Energies are computed per node in a thread pool and assembled in node
    order, so the result does not depend on scheduling.  Nodes whose energy
    lies within a relative 1e-9 of the minimum are treated as tied and get
    Hc = 1 exactly.  A node whose solve fails gets NaN and an entry in
    ``errors``.
    """
    if not is_strongly_connected(g):
        raise NotStronglyConnectedError()
    jobs = default_jobs() if jobs is None else max(1, jobs)

    def work(i):
        try:
            return node_energy(g, i, d, rank_eps), None
        except (NumericalError, ValueError, np.linalg.LinAlgError) as exc:
            return math.nan, f"{type(exc).__name__}: {exc}"

    if jobs == 1 or g.n == 1:
        out = [work(i) for i in range(g.n)]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            out = list(pool.map(work, range(g.n)))
    J = np.array([o[0] for o in out])
    errors = {i: o[1] for i, o in enumerate(out) if o[1] is not None}
    ok = np.isfinite(J)
    if not ok.any():
        return HerdabilityCentralityReport(J, np.full(g.n, math.nan), (), float(d), errors=errors)
    jmin = J[ok].min()
    Hc = jmin / J
    tied = ok & (J <= jmin * (1 + TIE_RTOL))
    Hc[tied] = 1.0
    return HerdabilityCentralityReport(J, Hc, tuple(np.flatnonzero(tied).tolist()), float(d),
                                       errors=errors)


def _katz_alpha(adj, alpha):
    lam_max = float(np.abs(np.linalg.eigvals(adj)).max()) if adj.size else 0.0
    if alpha is None:
        alpha = KATZ_DEFAULT_FRACTION / lam_max if lam_max > 0 else KATZ_DEFAULT_FRACTION
    if not alpha > 0 or alpha * lam_max >= 1:
        raise ValueError(f"Katz alpha {alpha} must lie in (0, 1/lambda_max) with "
                         f"lambda_max = {lam_max:.6g}")
    return alpha, lam_max


def _eigenvector(adj, tol=1e-13, max_iter=100_000):
    # shifting by I keeps the Perron root strictly dominant on periodic graphs
    M = adj.T + np.eye(adj.shape[0])
    x = np.ones(adj.shape[0]) / math.sqrt(adj.shape[0])
    for _ in range(max_iter):
        y = M @ x
        y /= np.linalg.norm(y)
        if np.abs(y - x).max() < tol:
            return y
        x = y
    raise NumericalError(f"power iteration did not converge in {max_iter} iterations")


def classic_centrality(g: Graph, measure: str, katz_alpha: float | None = None) -> ClassicCentralityReport:
    """Structural centralities on hop distances (edge weights are ignored).

    indegree
        number of in-bound edges.
    eccentricity
        largest hop distance from the node to any node it reaches.
    closeness
        sum of 1/dist to every other node; unreachable nodes add 0.
    betweenness
        Brandes pair-dependency sum, endpoints excluded, unnormalized;
        undirected graphs count each unordered pair once.
    eigenvector
        dominant eigenvector of A^T (in-bound), unit 2-norm, nonnegative.
    katz
        sum over in-bound walks of length >= 1 weighted by alpha**length,
        i.e. k = (I - alpha A^T)^{-1} alpha A^T 1.
    """
    params: dict = {}
    if measure == "indegree":
        scores = degrees(g)[:, 0].astype(float)
    elif measure in ("eccentricity", "closeness"):
        indptr, indices = g.csr
        D = _kernels.bfs_all_pairs(indptr, indices, g.n)
        if measure == "eccentricity":
            scores = D.max(axis=1).astype(float)
        else:
            with np.errstate(divide="ignore"):
                inv = np.where(D > 0, 1.0 / D, 0.0)
            scores = inv.sum(axis=1)
    elif measure == "betweenness":
        indptr, indices = g.csr
        scores = _kernels.brandes_betweenness(indptr, indices, g.n)
        if not g.directed:
            scores = scores / 2.0
    elif measure == "eigenvector":
        if not is_strongly_connected(g):
            raise NotStronglyConnectedError()
        scores = _eigenvector(g.adjacency())
    elif measure == "katz":
        adj = g.adjacency()
        alpha, lam_max = _katz_alpha(adj, katz_alpha)
        params = {"alpha": alpha, "lambda_max": lam_max}
        At = adj.T
        scores = np.linalg.solve(np.eye(g.n) - alpha * At, alpha * At.sum(axis=1))
    else:
        raise ValueError(f"unknown measure {measure!r}; choose from {MEASURES}")
    return ClassicCentralityReport(measure, np.asarray(scores, dtype=float), params)


def best_nodes(scores: np.ndarray, lowest: bool = False) -> list[int]:
    """Indices attaining the extreme score, with a relative tie tolerance."""
    s = -scores if lowest else scores
    top = s.max()
    return np.flatnonzero(s >= top - TIE_RTOL * max(1.0, abs(top))).tolist()


@dataclass(frozen=True)
class OverlapEntry:
    measure: str
    best_nodes: tuple
    hc_max: float
    hc_min: float

    @property
    def attains_max(self) -> bool:
        return self.hc_max == 1.0


def overlap_report(g: Graph, d: float = 1.0, hc: HerdabilityCentralityReport | None = None,
                   katz_alpha: float | None = None, jobs: int | None = None) -> list[OverlapEntry]:
    """Hc of the node(s) each classical measure ranks first.

    "First" is the largest score, except for eccentricity where the most
    central node has the smallest score.
    """
    if hc is None:
        hc = herdability_centrality(g, d, jobs)
    entries = []
    for m in MEASURES:
        rep = classic_centrality(g, m, katz_alpha)
        nodes = best_nodes(rep.scores, lowest=(m == "eccentricity"))
        vals = hc.Hc[nodes]
        entries.append(OverlapEntry(m, tuple(nodes), float(np.nanmax(vals)), float(np.nanmin(vals))))
    return entries


@dataclass(frozen=True)
class HubDegreeReport:
    avg_degree: float
    avg_degree_top: float
    top_nodes: tuple
    top_fraction: float


def hub_degree_report(g: Graph, d: float = 1.0, top_fraction: float = 0.10,
                      hc: HerdabilityCentralityReport | None = None,
                      jobs: int | None = None) -> HubDegreeReport:
    """Mean total degree overall vs over the ceil(fraction * n) highest-Hc nodes."""
    if not 0 < top_fraction <= 1:
        raise ValueError("top_fraction must lie in (0, 1]")
    if hc is None:
        hc = herdability_centrality(g, d, jobs)
    total = degrees(g)[:, 2].astype(float)
    k = math.ceil(top_fraction * g.n - 1e-12)
    key = np.where(np.isfinite(hc.Hc), hc.Hc, -np.inf)
    order = np.lexsort((np.arange(g.n), -key))
    top = order[:k]
    return HubDegreeReport(float(total.mean()), float(total[top].mean()),
                           tuple(int(v) for v in top), float(top_fraction))
