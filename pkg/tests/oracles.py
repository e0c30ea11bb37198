"""Brute-force reference computations, kept independent of the package's code paths."""

import itertools

import numpy as np
import scipy.linalg
import scipy.optimize
import sympy


def adjacency_lists(n, edges, directed=True):
    out = [set() for _ in range(n)]
    for u, v, *_ in edges:
        if u != v:
            out[u].add(v)
            if not directed:
                out[v].add(u)
    return out


def closure(out, sources):
    seen = set(sources)
    todo = list(sources)
    while todo:
        u = todo.pop()
        for v in out[u]:
            if v not in seen:
                seen.add(v)
                todo.append(v)
    return seen


def transitive_closure(n, out):
    R = np.eye(n, dtype=bool)
    for u in range(n):
        for v in out[u]:
            R[u, v] = True
    for k in range(n):
        R |= R[:, [k]] & R[[k], :]
    return R


def scc_partition(n, out):
    """Frozensets of mutually reachable nodes."""
    R = transitive_closure(n, out)
    mutual = R & R.T
    return {frozenset(np.flatnonzero(mutual[i]).tolist()) for i in range(n)}


def min_input_set_size(n, out):
    """Smallest k such that some k-subset reaches every node."""
    for k in range(1, n + 1):
        for S in itertools.combinations(range(n), k):
            if len(closure(out, S)) == n:
                return k
    return n


def floyd_warshall(n, out):
    D = np.full((n, n), np.inf)
    np.fill_diagonal(D, 0)
    for u in range(n):
        for v in out[u]:
            D[u, v] = 1
    for k in range(n):
        D = np.minimum(D, D[:, [k]] + D[[k], :])
    return D


def shortest_path_counts(n, out, D):
    """sigma[s, t] = number of walks of length D[s, t]; every such walk is a shortest path."""
    A = np.zeros((n, n), dtype=object)
    for u in range(n):
        for v in out[u]:
            A[u, v] = 1
    sigma = np.zeros((n, n), dtype=object)
    P = np.eye(n, dtype=object)
    for length in range(n):
        mask = D == length
        sigma[mask] = P[mask]
        P = P.dot(A)
    return sigma


def betweenness_enumeration(n, out):
    D = floyd_warshall(n, out)
    sigma = shortest_path_counts(n, out, D)
    bc = np.zeros(n)
    for s in range(n):
        for t in range(n):
            if s == t or not np.isfinite(D[s, t]):
                continue
            for v in range(n):
                if v in (s, t):
                    continue
                if D[s, v] + D[v, t] == D[s, t]:
                    bc[v] += float(sigma[s, v] * sigma[v, t]) / float(sigma[s, t])
    return bc


def closeness_enumeration(n, out):
    D = floyd_warshall(n, out)
    with np.errstate(divide="ignore"):
        inv = np.where(np.isfinite(D) & (D > 0), 1.0 / D, 0.0)
    return inv.sum(axis=1)


def eccentricity_enumeration(n, out):
    D = floyd_warshall(n, out)
    return np.where(np.isfinite(D), D, -1).max(axis=1)


def katz_series(adj, alpha, terms=50):
    At = adj.T
    term = np.ones(adj.shape[0])
    total = np.zeros(adj.shape[0])
    for _ in range(terms):
        term = alpha * (At @ term)
        total += term
    return total


def max_matching_bitmask(n, out):
    """Exact bipartite matching size (out-copies vs in-copies) by DP over in-copy subsets."""
    best = {0: 0}
    for u in range(n):
        nxt = dict(best)
        for mask, size in best.items():
            for v in out[u]:
                if not mask >> v & 1:
                    m2 = mask | (1 << v)
                    if nxt.get(m2, -1) < size + 1:
                        nxt[m2] = size + 1
        best = nxt
    return max(best.values())


def routh_hurwitz_stable(A):
    """Exact Routh-Hurwitz test on the characteristic polynomial of a rational matrix."""
    M = sympy.Matrix(A.tolist()).applyfunc(sympy.nsimplify)
    lam = sympy.Symbol("lam")
    coeffs = sympy.Poly(M.charpoly(lam).as_expr(), lam).all_coeffs()
    n = len(coeffs) - 1
    row0 = coeffs[0::2]
    row1 = coeffs[1::2] + [0] * (len(row0) - len(coeffs[1::2]))
    rows = [row0, row1]
    for _ in range(n - 1):
        a, b = rows[-2], rows[-1]
        if b[0] == 0:
            return False
        new = [(b[0] * a[k + 1] - a[0] * b[k + 1]) / b[0] for k in range(len(a) - 1)] + [0]
        rows.append(new)
    first = [r[0] for r in rows[: n + 1]]
    return all(c > 0 for c in first)


def kalman_rank(A, B):
    A = sympy.Matrix(A.tolist()).applyfunc(sympy.nsimplify)
    B = sympy.Matrix(B.tolist()).applyfunc(sympy.nsimplify)
    blocks = [B]
    for _ in range(A.shape[0] - 1):
        blocks.append(A * blocks[-1])
    return sympy.Matrix.hstack(*blocks).rank()


def simpson_gramian(A, B, t_f, steps):
    """Composite Simpson with an independent matrix exponential at every node."""
    ts = np.linspace(0.0, t_f, 2 * steps + 1)
    w = np.ones(ts.size)
    w[1:-1:2] = 4
    w[2:-1:2] = 2
    W = np.zeros((A.shape[0], A.shape[0]))
    for t, wk in zip(ts, w):
        Y = scipy.linalg.expm(A * t) @ B
        W += wk * (Y @ Y.T)
    return W * (ts[1] - ts[0]) / 3


def qp_by_enumeration(V, lam, d):
    """Global optimum of min sum a^2/lam s.t. V a >= d by enumerating KKT active sets."""
    n, r = V.shape
    M = V * np.sqrt(lam)
    best = np.inf
    for k in range(1, r + 1):
        for S in itertools.combinations(range(n), k):
            Aw = M[list(S)]
            if np.linalg.matrix_rank(Aw) < k:
                continue
            try:
                nu = np.linalg.solve(Aw @ Aw.T, np.full(k, d))
            except np.linalg.LinAlgError:
                continue
            b = Aw.T @ nu
            if np.all(nu >= -1e-10) and np.all(M @ b >= d - 1e-9):
                best = min(best, float(b @ b))
    return best


def qp_by_ldp(V, lam, d):
    """Same optimum via the least-distance dual solved by NNLS."""
    M = V * np.sqrt(lam)
    n, r = M.shape
    E = np.vstack([M.T, np.full((1, n), d)])
    f = np.zeros(r + 1)
    f[-1] = 1.0
    u, _ = scipy.optimize.nnls(E, f, maxiter=50 * n)
    res = E @ u - f
    b = -res[:r] / res[r]
    return float(b @ b)


def qp_by_grid(V, lam, d, lo, hi, resolution):
    """Dense grid over the box [lo, hi]^r, chunked to bound memory."""
    r = V.shape[1]
    axis = np.arange(lo, hi + resolution / 2, resolution)
    best = np.inf
    if r == 1:
        A = axis[:, None]
        ok = np.all(A @ V.T >= d, axis=1)
        return float(np.min((A[ok] ** 2 / lam).sum(axis=1))) if ok.any() else np.inf
    assert r == 2, "dense grid used for r <= 2 only"
    for a0 in np.array_split(axis, max(1, axis.size // 200)):
        A0, A1 = np.meshgrid(a0, axis, indexing="ij")
        X = A0[..., None] * V[:, 0] + A1[..., None] * V[:, 1]
        ok = np.all(X >= d, axis=-1)
        if ok.any():
            J = A0 ** 2 / lam[0] + A1 ** 2 / lam[1]
            best = min(best, float(J[ok].min()))
    return best


def qp_by_refined_grid(V, lam, d, points=21, levels=90):
    """Zooming grid search in b = alpha / sqrt(lam), where the objective is ||b||^2.

    The first box is the ball bound from a known feasible point; each level
    recentres on the best feasible grid point and shrinks the box by 0.7.
    """
    M = V * np.sqrt(lam)
    r = M.shape[1]
    b = M.T @ np.ones(M.shape[0])
    if (M @ b).min() <= 0:
        b = np.linalg.lstsq(M, np.full(M.shape[0], d), rcond=None)[0]
    b = b * d / (M @ b).min()
    best = float(b @ b)
    center = np.zeros(r)
    half = np.sqrt(best) * 1.0001
    ticks = np.linspace(-1.0, 1.0, points)
    offsets = np.stack([g.ravel() for g in np.meshgrid(*[ticks] * r, indexing="ij")], axis=1)
    for _ in range(levels):
        B = center + half * offsets
        ok = np.all(B @ M.T >= d, axis=1)
        if ok.any():
            J = np.einsum("ij,ij->i", B[ok], B[ok])
            k = int(np.argmin(J))
            if J[k] <= best:
                best = float(J[k])
                center = B[ok][k]
        half *= 0.7
    return best
