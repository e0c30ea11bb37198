"""Inner loops over CSR graphs and dense linear systems.

Every function here takes plain numpy arrays and is compiled by numba when
available (see :mod:`herd._accel`).  Graph kernels expect ``int64`` CSR arrays
``(indptr, indices)`` describing out-adjacency.
"""

import numpy as np

from herd._accel import jit


@jit
def reach_mask(indptr, indices, n, sources):
    seen = np.zeros(n, dtype=np.bool_)
    queue = np.empty(n, dtype=np.int64)
    tail = 0
    for s in sources:
        if not seen[s]:
            seen[s] = True
            queue[tail] = s
            tail += 1
    head = 0
    while head < tail:
        u = queue[head]
        head += 1
        for k in range(indptr[u], indptr[u + 1]):
            v = indices[k]
            if not seen[v]:
                seen[v] = True
                queue[tail] = v
                tail += 1
    return seen


@jit
def tarjan_scc(indptr, indices, n):
    """Iterative Tarjan.  Returns (component label per node, component count).

    Labels come out in reverse topological order of the condensation.
    """
    index = np.full(n, -1, dtype=np.int64)
    low = np.zeros(n, dtype=np.int64)
    onstack = np.zeros(n, dtype=np.bool_)
    comp = np.full(n, -1, dtype=np.int64)
    stack = np.empty(n, dtype=np.int64)
    call = np.empty(n, dtype=np.int64)
    edge_ptr = np.empty(n, dtype=np.int64)
    sp = 0
    counter = 0
    ncomp = 0
    for s in range(n):
        if index[s] != -1:
            continue
        cs = 0
        call[0] = s
        index[s] = counter
        low[s] = counter
        counter += 1
        stack[sp] = s
        sp += 1
        onstack[s] = True
        edge_ptr[s] = indptr[s]
        while cs >= 0:
            v = call[cs]
            if edge_ptr[v] < indptr[v + 1]:
                w = indices[edge_ptr[v]]
                edge_ptr[v] += 1
                if index[w] == -1:
                    index[w] = counter
                    low[w] = counter
                    counter += 1
                    stack[sp] = w
                    sp += 1
                    onstack[w] = True
                    edge_ptr[w] = indptr[w]
                    cs += 1
                    call[cs] = w
                elif onstack[w] and index[w] < low[v]:
                    low[v] = index[w]
            else:
                if low[v] == index[v]:
                    while True:
                        sp -= 1
                        w = stack[sp]
                        onstack[w] = False
                        comp[w] = ncomp
                        if w == v:
                            break
                    ncomp += 1
                cs -= 1
                if cs >= 0:
                    u = call[cs]
                    if low[v] < low[u]:
                        low[u] = low[v]
    return comp, ncomp


@jit
def union_find_components(n, src, dst):
    parent = np.arange(n)
    for k in range(src.shape[0]):
        a = src[k]
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        b = dst[k]
        while parent[b] != b:
            parent[b] = parent[parent[b]]
            b = parent[b]
        if a != b:
            if a < b:
                parent[b] = a
            else:
                parent[a] = b
    for i in range(n):
        r = i
        while parent[r] != r:
            r = parent[r]
        parent[i] = r
    return parent


@jit
def hopcroft_karp(n_left, n_right, indptr, indices):
    """Maximum bipartite matching.  Returns (match_left, match_right), -1 = free."""
    inf = n_left + n_right + 1
    match_l = np.full(n_left, -1, dtype=np.int64)
    match_r = np.full(n_right, -1, dtype=np.int64)
    dist = np.empty(n_left, dtype=np.int64)
    queue = np.empty(n_left, dtype=np.int64)
    edge_ptr = np.empty(n_left, dtype=np.int64)
    stack = np.empty(n_left, dtype=np.int64)
    while True:
        head = 0
        tail = 0
        for u in range(n_left):
            if match_l[u] == -1:
                dist[u] = 0
                queue[tail] = u
                tail += 1
            else:
                dist[u] = inf
        found = False
        while head < tail:
            u = queue[head]
            head += 1
            for k in range(indptr[u], indptr[u + 1]):
                w = match_r[indices[k]]
                if w == -1:
                    found = True
                elif dist[w] == inf:
                    dist[w] = dist[u] + 1
                    queue[tail] = w
                    tail += 1
        if not found:
            break
        for u in range(n_left):
            edge_ptr[u] = indptr[u]
        for root in range(n_left):
            if match_l[root] != -1:
                continue
            top = 0
            stack[0] = root
            while top >= 0:
                u = stack[top]
                pushed = False
                while edge_ptr[u] < indptr[u + 1]:
                    v = indices[edge_ptr[u]]
                    w = match_r[v]
                    if w == -1:
                        for i in range(top, -1, -1):
                            ui = stack[i]
                            vi = indices[edge_ptr[ui]]
                            match_l[ui] = vi
                            match_r[vi] = ui
                        top = -1
                        pushed = True
                        break
                    if dist[w] == dist[u] + 1:
                        top += 1
                        stack[top] = w
                        pushed = True
                        break
                    edge_ptr[u] += 1
                if not pushed:
                    dist[u] = inf
                    top -= 1
                    if top >= 0:
                        edge_ptr[stack[top]] += 1
    return match_l, match_r


@jit
def bfs_all_pairs(indptr, indices, n):
    """Hop distances; -1 marks unreachable pairs.  Row = source."""
    dist = np.full((n, n), -1, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    for s in range(n):
        dist[s, s] = 0
        queue[0] = s
        head = 0
        tail = 1
        while head < tail:
            u = queue[head]
            head += 1
            for k in range(indptr[u], indptr[u + 1]):
                v = indices[k]
                if dist[s, v] == -1:
                    dist[s, v] = dist[s, u] + 1
                    queue[tail] = v
                    tail += 1
    return dist


@jit
def brandes_betweenness(indptr, indices, n):
    """Unnormalized directed betweenness over ordered (s, t) pairs, endpoints excluded."""
    bc = np.zeros(n)
    sigma = np.zeros(n)
    delta = np.zeros(n)
    dist = np.empty(n, dtype=np.int64)
    order = np.empty(n, dtype=np.int64)
    for s in range(n):
        for i in range(n):
            sigma[i] = 0.0
            delta[i] = 0.0
            dist[i] = -1
        sigma[s] = 1.0
        dist[s] = 0
        order[0] = s
        head = 0
        tail = 1
        while head < tail:
            u = order[head]
            head += 1
            for k in range(indptr[u], indptr[u + 1]):
                v = indices[k]
                if dist[v] < 0:
                    dist[v] = dist[u] + 1
                    order[tail] = v
                    tail += 1
                if dist[v] == dist[u] + 1:
                    sigma[v] += sigma[u]
        for j in range(tail - 1, -1, -1):
            v = order[j]
            for k in range(indptr[v], indptr[v + 1]):
                w = indices[k]
                if dist[w] == dist[v] + 1:
                    delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w])
            if v != s:
                bc[v] += delta[v]
    return bc


@jit
def rk4_linear(A, B, u_half, h, x0):
    """Classical RK4 for x' = A x + B u(t) on a uniform grid.

    ``u_half[j]`` holds u(j h / 2), so row count is ``2 * steps + 1``.
    Returns (states, index of first nonfinite step or -1).
    """
    steps = (u_half.shape[0] - 1) // 2
    n = x0.shape[0]
    X = np.empty((steps + 1, n))
    x = x0.copy()
    X[0] = x
    for k in range(steps):
        f0 = B @ u_half[2 * k]
        fm = B @ u_half[2 * k + 1]
        f1 = B @ u_half[2 * k + 2]
        k1 = A @ x + f0
        k2 = A @ (x + 0.5 * h * k1) + fm
        k3 = A @ (x + 0.5 * h * k2) + fm
        k4 = A @ (x + h * k3) + f1
        x = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(x)):
            return X[: k + 1], k + 1
        X[k + 1] = x
    return X, -1


@jit
def gl_gramian_accumulate(E_panel, E_nodes, weights, Y0, panels):
    """Sum of w_j * Z Z^T over panels, with Z = E_nodes[j] @ Y and Y advanced by E_panel."""
    n = Y0.shape[0]
    m = Y0.shape[1]
    q = weights.shape[0]
    W = np.zeros((n, n))
    Y = Y0.copy()
    for _ in range(panels):
        for j in range(q):
            Z = E_nodes[j] @ Y
            for c in range(m):
                z = Z[:, c].copy()
                W += weights[j] * np.outer(z, z)
        Y = E_panel @ Y
    return W


@jit
def backward_propagate(E, p, count):
    """Rows z_k with z_count = p and z_k = E @ z_{k+1}."""
    Z = np.empty((count + 1, p.shape[0]))
    z = p.copy()
    Z[count] = z
    for k in range(count - 1, -1, -1):
        z = E @ z
        Z[k] = z
    return Z
