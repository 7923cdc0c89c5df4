"""Vectorized feasibility checks used inside the solvers' hot loops."""
from __future__ import annotations

import numpy as np


def pairwise_sq(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    dx = a[:, None, 0] - b[None, :, 0]
    dy = a[:, None, 1] - b[None, :, 1]
    return dx * dx + dy * dy


def reach_from(adj: np.ndarray, start: int = 0) -> np.ndarray:
    """Boolean mask of vertices reachable from ``start`` in adjacency ``adj``."""
    reached = np.zeros(len(adj), dtype=bool)
    reached[start] = True
    frontier = reached.copy()
    while frontier.any():
        new = adj[frontier].any(axis=0) & ~reached
        reached |= new
        frontier = new
    return reached


class Layout:
    """Nodes plus the two squared radii; answers feasibility questions fast."""

    def __init__(self, nodes: np.ndarray, d_cover: float, d_max: float):
        self.nodes = np.asarray(nodes, dtype=float).reshape(-1, 2)
        self.d_cover = d_cover
        self.d_max = d_max
        self.rc2 = d_cover * d_cover
        self.rm2 = d_max * d_max

    def cover_matrix(self, stations: np.ndarray) -> np.ndarray:
        """(N, M) mask, True where node i lies within d_cover of station j."""
        return pairwise_sq(self.nodes, stations) <= self.rc2

    def covers(self, point, node_ids: np.ndarray) -> bool:
        if len(node_ids) == 0:
            return True
        sub = self.nodes[node_ids]
        dx = sub[:, 0] - point[0]
        dy = sub[:, 1] - point[1]
        return bool(np.all(dx * dx + dy * dy <= self.rc2))

    def adjacency(self, stations: np.ndarray) -> np.ndarray:
        return pairwise_sq(stations, stations) <= self.rm2

    def connected(self, stations: np.ndarray) -> bool:
        return bool(reach_from(self.adjacency(stations)).all())

    def covered(self, stations: np.ndarray) -> bool:
        return bool(self.cover_matrix(stations).any(axis=1).all())

    def feasible(self, stations: np.ndarray) -> bool:
        return self.connected(stations) and self.covered(stations)
