"""Driver-node count from maximum matching (structural controllability baseline)."""

from dataclasses import dataclass

import numpy as np

from herd import _kernels
from herd.graph import Graph


@dataclass(frozen=True)
class DriverNodeResult:
    N_c: int
    n: int
    matching_size: int
    driver_nodes: tuple

    @property
    def n_c(self) -> float:
        return self.N_c / self.n

    def to_dict(self, g: Graph | None = None) -> dict:
        nodes = list(self.driver_nodes)
        if g is not None:
            nodes = [g.labels[v] for v in nodes]
        return {"N_c": self.N_c, "n_c": self.n_c, "matching_size": self.matching_size,
                "driver_nodes": nodes}


def maximum_matching(g: Graph) -> tuple[np.ndarray, np.ndarray]:
    """Hopcroft-Karp on out-copies x in-copies; one bipartite edge per directed edge.

    Undirected graphs contribute both orientations.  Returns
    ``(match_out, match_in)`` with -1 for unmatched copies.
    """
    indptr, indices = g.csr
    return _kernels.hopcroft_karp(g.n, g.n, indptr, indices)


def driver_node_count(g: Graph) -> DriverNodeResult:
    """N_c = max(n - |M|, 1); unmatched in-copies are the driver nodes.

    A perfectly matched graph still needs one driver, taken as node 0.
    """
    _, match_in = maximum_matching(g)
    size = int(np.count_nonzero(match_in >= 0))
    drivers = tuple(int(v) for v in np.flatnonzero(match_in < 0))
    if not drivers:
        drivers = (0,)
    return DriverNodeResult(max(g.n - size, 1), g.n, size, drivers)
