"""Seeded random graph generators for test corpora and the CLI."""

import numpy as np

from herd.graph import Graph


def erdos(n: int, p: float, seed: int = 0, directed: bool = True) -> Graph:
    """G(n, p); directed graphs draw each ordered pair independently."""
    rng = np.random.default_rng(seed)
    mask = rng.random((n, n)) < p
    np.fill_diagonal(mask, False)
    if not directed:
        mask = np.triu(mask, 1)
    u, v = np.nonzero(mask)
    return Graph(n, zip(u.tolist(), v.tolist()), directed)


def scalefree(n: int, m: int, seed: int = 0, directed: bool = True) -> Graph:
    """Preferential attachment: each new node links to ``m`` earlier nodes
    chosen with probability proportional to degree + 1.  In the directed case
    each link gets a random orientation.
    """
    if m < 1 or n <= m:
        raise ValueError("need 1 <= m < n")
    rng = np.random.default_rng(seed)
    deg = np.zeros(n)
    edges = []
    for v in range(m + 1):
        for u in range(v):
            edges.append((u, v))
            deg[u] += 1
            deg[v] += 1
    for v in range(m + 1, n):
        w = deg[:v] + 1.0
        targets = rng.choice(v, size=m, replace=False, p=w / w.sum())
        for t in targets.tolist():
            edges.append((t, v))
            deg[t] += 1
            deg[v] += 1
    if directed:
        flip = rng.random(len(edges)) < 0.5
        edges = [(b, a) if f else (a, b) for (a, b), f in zip(edges, flip)]
    return Graph(n, edges, directed)


def strongly_connected(n: int, p: float, seed: int = 0, weighted: bool = False) -> Graph:
    """Random Hamiltonian cycle plus G(n, p) chords; strongly connected by construction."""
    rng = np.random.default_rng(seed)
    perm = rng.permutation(n)
    edges = {(int(perm[i]), int(perm[(i + 1) % n])) for i in range(n)} if n > 1 else set()
    mask = rng.random((n, n)) < p
    np.fill_diagonal(mask, False)
    edges |= set(zip(*(a.tolist() for a in np.nonzero(mask))))
    edges = sorted(edges)
    if weighted:
        w = rng.uniform(0.5, 2.0, len(edges))
        return Graph(n, [(u, v, float(x)) for (u, v), x in zip(edges, w)], True)
    return Graph(n, edges, True)


def from_spec(text: str, directed: bool = True) -> Graph:
    """Parse ``erdos:n,p,seed`` or ``scalefree:n,m,seed``."""
    kind, _, args = text.partition(":")
    parts = [a.strip() for a in args.split(",")]
    try:
        if kind == "erdos" and len(parts) == 3:
            return erdos(int(parts[0]), float(parts[1]), int(parts[2]), directed)
        if kind == "scalefree" and len(parts) == 3:
            return scalefree(int(parts[0]), int(parts[1]), int(parts[2]), directed)
    except ValueError as exc:
        raise ValueError(f"bad synthetic spec {text!r}: {exc}") from None
    raise ValueError(f"bad synthetic spec {text!r}; expected erdos:n,p,seed or scalefree:n,m,seed")
