"""Input connectability and minimal herding-node selection.

A positive linear system is completely herdable exactly when every state node
can be reached from an input node.  The smallest such input set picks one node
from every root component of the SCC condensation.
"""

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from herd.graph import Graph, degrees, reachable_from, scc_decompose, weakly_connected_components

TIE_BREAK_POLICIES = ("min_id", "max_out_degree", "max_degree")


@dataclass(frozen=True)
class HerdingCover:
    herding_nodes: tuple
    N_H: int
    N_r: int
    N_w: int
    n: int

    @property
    def n_H(self) -> float:
        """Fraction of nodes that receive input."""
        return self.N_H / self.n

    @property
    def n_w(self) -> float:
        """Herding nodes per weakly connected component."""
        return self.N_H / self.N_w

    def to_dict(self, g: Graph | None = None) -> dict:
        nodes = list(self.herding_nodes)
        if g is not None:
            nodes = [g.labels[v] for v in nodes]
        return {"N_H": self.N_H, "N_r": self.N_r, "N_w": self.N_w,
                "n_H": self.n_H, "n_w": self.n_w, "herding_nodes": nodes}


def is_herdable(g: Graph, input_nodes: Iterable[int]) -> tuple[bool, set[int]]:
    """Return ``(herdable, unreached)`` for the given set of input nodes."""
    inputs = set(int(v) for v in input_nodes)
    if not inputs:
        raise ValueError("input_nodes must be nonempty")
    unreached = set(range(g.n)) - reachable_from(g, inputs)
    return not unreached, unreached


def herding_cover(g: Graph, tie_break: str = "min_id") -> HerdingCover:
    """One representative per root SCC, in O(n + |E|).

    ``tie_break`` picks the representative inside each root component:
    ``"min_id"`` (default), ``"max_out_degree"`` or ``"max_degree"``; the
    latter two fall back to the smallest id on ties.
    """
    if tie_break not in TIE_BREAK_POLICIES:
        raise ValueError(f"unknown tie_break {tie_break!r}; choose from {TIE_BREAK_POLICIES}")
    dag = scc_decompose(g)
    if tie_break == "min_id":
        score = np.zeros(g.n)
    else:
        deg = degrees(g)
        score = deg[:, 1] if tie_break == "max_out_degree" else deg[:, 2]
    chosen = []
    for c in dag.roots:
        members = dag.components[c]
        # members are sorted, so max() keeps the smallest id among equals
        chosen.append(max(members, key=lambda v: (score[v], -v)))
    chosen.sort()
    return HerdingCover(tuple(chosen), len(chosen), len(dag.roots),
                        len(weakly_connected_components(g)), g.n)


def build_input_matrix(cover, n: int) -> np.ndarray:
    """n x N_H 0/1 matrix with an indicator column per herding node.

    ``cover`` may be a :class:`HerdingCover` or any iterable of node ids.
    """
    nodes = list(cover.herding_nodes if isinstance(cover, HerdingCover) else cover)
    if not nodes:
        raise ValueError("cannot build an input matrix from an empty cover")
    B = np.zeros((n, len(nodes)))
    for col, v in enumerate(nodes):
        if not 0 <= v < n:
            raise ValueError(f"herding node {v} outside 0..{n - 1}")
        B[v, col] = 1.0
    return B
