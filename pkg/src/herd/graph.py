"""Weighted graphs, edge-list I/O and linear-time decompositions."""

import io
import warnings
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence, TextIO, Union

import numpy as np

from herd import _kernels


class EdgeListError(ValueError):
    """Raised for malformed or invalid edge-list input."""

    def __init__(self, lineno: int, line: str, reason: str):
        self.lineno = lineno
        self.line = line
        super().__init__(f"line {lineno}: {reason}: {line!r}")


class Graph:
    """Directed or undirected graph with strictly positive edge weights.

    Nodes are ``0..n-1``.  Undirected graphs store both orientations of every
    edge internally, so all traversals can treat the graph as directed.
    Self-loops are dropped and parallel edges have their weights summed, both
    with a warning.  Instances are read-only after construction.

    Parameters
    ----------
    n : int
        Number of nodes.
    edges : iterable of (u, v) or (u, v, w)
        Edge list over node ids; ``w`` defaults to 1.0.
    directed : bool
    labels : sequence of str, optional
        Original node labels; defaults to ``str(i)``.
    """

    def __init__(self, n: int, edges: Iterable = (), directed: bool = True,
                 labels: Sequence[str] | None = None):
        if n < 1:
            raise ValueError("graph needs at least one node")
        self.n = int(n)
        self.directed = bool(directed)
        if labels is None:
            labels = [str(i) for i in range(self.n)]
        if len(labels) != self.n:
            raise ValueError("labels must have one entry per node")
        self.labels = tuple(str(x) for x in labels)

        merged: dict[tuple[int, int], float] = {}
        loops = dups = 0
        for e in edges:
            u, v = int(e[0]), int(e[1])
            w = float(e[2]) if len(e) > 2 else 1.0
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u}, {v}) references a node outside 0..{self.n - 1}")
            if not w > 0 or not np.isfinite(w):
                raise ValueError(f"edge ({u}, {v}) has non-positive weight {w}")
            if u == v:
                loops += 1
                continue
            key = (u, v) if directed or u < v else (v, u)
            if key in merged:
                dups += 1
                merged[key] += w
            else:
                merged[key] = w
        if loops:
            warnings.warn(f"dropped {loops} self-loop(s)", stacklevel=2)
        if dups:
            warnings.warn(f"summed weights of {dups} duplicate edge(s)", stacklevel=2)

        keys = sorted(merged)
        self._canonical = tuple((u, v, merged[(u, v)]) for u, v in keys)
        pairs = list(self._canonical)
        if not directed:
            pairs += [(v, u, w) for u, v, w in self._canonical]
            pairs.sort()
        src = np.array([p[0] for p in pairs], dtype=np.int64)
        dst = np.array([p[1] for p in pairs], dtype=np.int64)
        wts = np.array([p[2] for p in pairs], dtype=float)
        for arr in (src, dst, wts):
            arr.setflags(write=False)
        self.src, self.dst, self.weights = src, dst, wts

    def __repr__(self):
        kind = "directed" if self.directed else "undirected"
        return f"Graph(n={self.n}, L={self.edge_count}, {kind})"

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (self.n == other.n and self.directed == other.directed
                and self.labels == other.labels and self._canonical == other._canonical)

    def __hash__(self):
        return hash((self.n, self.directed, self.labels, self._canonical))

    @property
    def edge_count(self) -> int:
        """Number of edges as given in the input (undirected edges count once)."""
        return len(self._canonical)

    def edges(self):
        """Canonical edge list; undirected edges appear once with u < v."""
        return list(self._canonical)

    @cached_property
    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        """Out-adjacency as (indptr, indices)."""
        return _to_csr(self.n, self.src, self.dst)

    @cached_property
    def csr_in(self) -> tuple[np.ndarray, np.ndarray]:
        """In-adjacency as (indptr, indices)."""
        return _to_csr(self.n, self.dst, self.src)

    def adjacency(self, weighted: bool = False) -> np.ndarray:
        """Dense matrix with ``M[u, v]`` set for every internal edge u -> v."""
        M = np.zeros((self.n, self.n))
        M[self.src, self.dst] = self.weights if weighted else 1.0
        return M

    def label_of(self, node: int) -> str:
        return self.labels[node]

    def node_of(self, label: str) -> int:
        try:
            return self._label_index[str(label)]
        except KeyError:
            raise KeyError(f"unknown node label {label!r}") from None

    @cached_property
    def _label_index(self):
        return {lab: i for i, lab in enumerate(self.labels)}

    def subgraph(self, nodes: Iterable[int]) -> "Graph":
        """Induced subgraph on ``nodes`` (renumbered in ascending order, labels kept)."""
        keep = sorted(set(int(v) for v in nodes))
        remap = {v: i for i, v in enumerate(keep)}
        edges = [(remap[u], remap[v], w) for u, v, w in self._canonical
                 if u in remap and v in remap]
        return Graph(len(keep), edges, self.directed, [self.labels[v] for v in keep])


def _to_csr(n, src, dst):
    order = np.lexsort((dst, src))
    indices = np.ascontiguousarray(dst[order], dtype=np.int64)
    counts = np.bincount(src, minlength=n)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    return indptr, indices


def _sort_labels(labels):
    try:
        return sorted(labels, key=int)
    except ValueError:
        return labels


def parse_edge_list(text: Union[str, TextIO], directed: bool = True) -> Graph:
    """Parse whitespace-separated ``u v [w]`` lines into a :class:`Graph`.

    Lines starting with ``#`` and blank lines are skipped.  A line holding a
    single token declares an isolated node.  When every label is an integer,
    ids follow numeric order; otherwise they follow first appearance.
    """
    if isinstance(text, str):
        text = io.StringIO(text)
    seen: dict[str, None] = {}
    rows = []
    for lineno, raw in enumerate(text, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) == 1:
            seen.setdefault(parts[0])
            continue
        if len(parts) > 3:
            raise EdgeListError(lineno, line, "expected 'u v [w]'")
        w = 1.0
        if len(parts) == 3:
            try:
                w = float(parts[2])
            except ValueError:
                raise EdgeListError(lineno, line, "weight is not a number") from None
            if not w > 0 or not np.isfinite(w):
                raise EdgeListError(lineno, line, "non-positive weight")
        seen.setdefault(parts[0])
        seen.setdefault(parts[1])
        rows.append((parts[0], parts[1], w))
    if not seen:
        raise EdgeListError(0, "", "no nodes in input")
    labels = _sort_labels(list(seen))
    index = {lab: i for i, lab in enumerate(labels)}
    edges = [(index[u], index[v], w) for u, v, w in rows]
    return Graph(len(labels), edges, directed, labels)


def read_edge_list(path, directed: bool = True) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return parse_edge_list(fh, directed)


def serialize_edge_list(g: Graph) -> str:
    """Deterministic edge-list text; isolated nodes are emitted as single tokens."""
    lines = []
    touched = set()
    for u, v, w in g.edges():
        touched.update((u, v))
        a, b = g.labels[u], g.labels[v]
        lines.append(f"{a} {b}" if w == 1.0 else f"{a} {b} {w!r}")
    for i in range(g.n):
        if i not in touched:
            lines.append(g.labels[i])
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class SccDag:
    """Condensation of a graph into strongly connected components.

    Components are numbered by their smallest member id, and each member list
    is sorted.
    """

    component_of: np.ndarray
    components: tuple
    dag_edges: frozenset
    roots: tuple

    @property
    def n_components(self) -> int:
        return len(self.components)


def scc_decompose(g: Graph) -> SccDag:
    indptr, indices = g.csr
    raw, ncomp = _kernels.tarjan_scc(indptr, indices, g.n)
    # renumber by first member so output does not depend on traversal order
    first = np.full(ncomp, g.n, dtype=np.int64)
    np.minimum.at(first, raw, np.arange(g.n))
    rank = np.empty(ncomp, dtype=np.int64)
    rank[np.argsort(first, kind="stable")] = np.arange(ncomp)
    comp = rank[raw]
    comp.setflags(write=False)
    members = [[] for _ in range(ncomp)]
    for v in range(g.n):
        members[comp[v]].append(v)
    cu, cv = comp[g.src], comp[g.dst]
    cross = cu != cv
    dag_edges = frozenset(zip(cu[cross].tolist(), cv[cross].tolist()))
    has_in = np.zeros(ncomp, dtype=bool)
    has_in[cv[cross]] = True
    roots = tuple(int(c) for c in np.flatnonzero(~has_in))
    return SccDag(comp, tuple(tuple(m) for m in members), dag_edges, roots)


def weakly_connected_components(g: Graph) -> list[list[int]]:
    """Node partition ignoring edge direction, ordered by smallest member."""
    parent = _kernels.union_find_components(g.n, g.src, g.dst)
    groups: dict[int, list[int]] = {}
    for v in range(g.n):
        groups.setdefault(int(parent[v]), []).append(v)
    return sorted(groups.values(), key=lambda m: m[0])


def reachable_from(g: Graph, sources: Iterable[int]) -> set[int]:
    src = np.array(sorted(set(int(s) for s in sources)), dtype=np.int64)
    if src.size == 0:
        raise ValueError("sources must be nonempty")
    if src[0] < 0 or src[-1] >= g.n:
        raise ValueError(f"source ids must lie in 0..{g.n - 1}")
    indptr, indices = g.csr
    mask = _kernels.reach_mask(indptr, indices, g.n, src)
    return set(np.flatnonzero(mask).tolist())


def degrees(g: Graph) -> np.ndarray:
    """Unweighted degree table with columns (in, out, total), one row per node.

    For undirected graphs all three columns equal the incident edge count.
    """
    indeg = np.bincount(g.dst, minlength=g.n)
    outdeg = np.bincount(g.src, minlength=g.n)
    total = indeg + outdeg if g.directed else indeg
    return np.column_stack([indeg, outdeg, total]).astype(np.int64)


def is_strongly_connected(g: Graph) -> bool:
    return scc_decompose(g).n_components == 1


def largest_scc(g: Graph) -> tuple[Graph, list[int]]:
    """Induced subgraph on the largest SCC (ties go to the lowest-numbered one)."""
    dag = scc_decompose(g)
    best = max(dag.components, key=len)
    return g.subgraph(best), list(best)
