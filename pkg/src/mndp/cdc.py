"""Initial deployment: cluster uncovered nodes, then repair coverage and connectivity.

Pipeline for nodes outside the BS's disk:

1. count isolated nodes (nearest-neighbour distance above the mean) and set
   K = max(1, floor(alpha * |isolated|));
2. run Lloyd's K-means seeded at the K most isolated nodes and put a PAD on
   every centroid;
3. while some node is uncovered, put a PAD on the uncovered node whose nearest
   uncovered neighbour is farthest away;
4. grow a tree from the BS, always attaching the PAD closest to the tree and
   inserting relays spaced exactly ``d_max`` apart when the gap is too long.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._layout import pairwise_sq
from .energy import UavParams, radii
from .geometry import point_toward
from .scenario import Scenario
from .verify import Deployment

ALPHA_DEFAULT = 0.3


@dataclass(frozen=True)
class IsolationStats:
    nn_dist: np.ndarray
    mean_nn: float
    isolated_ids: frozenset


@dataclass(frozen=True)
class ClusterModel:
    k: int
    centroids: np.ndarray
    assignment: np.ndarray


def _as_array(nodes) -> np.ndarray:
    return np.asarray(nodes, dtype=float).reshape(-1, 2)


def isolation_stats(nodes) -> IsolationStats:
    """Nearest-neighbour distances and the set of isolated nodes.

    A lone node is reported as isolated with distance 0.
    """
    pts = _as_array(nodes)
    if len(pts) == 0:
        raise ValueError("isolation_stats needs at least one node")
    if len(pts) == 1:
        return IsolationStats(np.zeros(1), 0.0, frozenset({0}))
    d2 = pairwise_sq(pts, pts)
    np.fill_diagonal(d2, np.inf)
    nn = np.sqrt(d2.min(axis=1))
    mean = float(nn.mean())
    return IsolationStats(nn, mean, frozenset(np.flatnonzero(nn > mean).tolist()))


def choose_k(stats: IsolationStats, alpha: float = ALPHA_DEFAULT) -> int:
    if alpha <= 0:
        raise ValueError("alpha must be > 0")
    # guard against 0.3 * 10 landing a hair below 3
    k = math.floor(alpha * len(stats.isolated_ids) + 1e-9)
    return max(1, min(k, len(stats.nn_dist)))


def initial_centroids(nodes, stats: IsolationStats, k: int) -> np.ndarray:
    """The k most isolated nodes (largest nn distance, lowest id on ties)."""
    pts = _as_array(nodes)
    order = sorted(range(len(pts)), key=lambda i: (-stats.nn_dist[i], i))
    return pts[order[:k]].copy()


def kmeans(nodes, k: int, init, max_iters: int = 300, tol: float = 1e-3) -> ClusterModel:
    """Lloyd iterations from fixed initial centroids.

    Stops when no centroid moves by ``tol`` or more. A cluster that loses all
    its nodes is re-seeded at the node worst served by its current centroid.
    """
    pts = _as_array(nodes)
    cent = _as_array(init).copy()
    if not 1 <= k <= len(pts):
        raise ValueError(f"k={k} must be within [1, {len(pts)}]")
    if len(cent) != k:
        raise ValueError("init must hold exactly k centroids")
    for _ in range(max_iters):
        d2 = pairwise_sq(pts, cent)
        labels = d2.argmin(axis=1)
        err = d2[np.arange(len(pts)), labels]
        counts = np.bincount(labels, minlength=k)
        new = np.empty_like(cent)
        for c in range(k):
            if counts[c]:
                new[c] = pts[labels == c].mean(axis=0)
        taken = set()
        for c in np.flatnonzero(counts == 0):
            worst = sorted((i for i in range(len(pts)) if i not in taken),
                           key=lambda i: (-err[i], i))[0]
            taken.add(worst)
            new[c] = pts[worst]
        moved = np.sqrt(((new - cent) ** 2).sum(axis=1)).max()
        cent = new
        if moved < tol:
            break
    labels = pairwise_sq(pts, cent).argmin(axis=1)
    return ClusterModel(k, cent, labels)


def connect_stations(bs, pads, d_max: float) -> list[tuple[float, float]]:
    """Attach every PAD to a tree grown from the BS, inserting relays.

    Returns the station list, BS first, in the order vertices joined the tree.
    Each relay lies on the segment from the closest tree vertex toward the
    pending PAD, exactly ``d_max`` (rounded inward) from that vertex.
    """
    rm2 = d_max * d_max
    verts = [(float(bs[0]), float(bs[1]))]
    pending = [tuple(map(float, p)) for p in pads]
    if not pending:
        return verts
    parr = np.array(pending, dtype=float)
    best = pairwise_sq(parr, np.array(verts))[:, 0]
    best_v = np.zeros(len(pending), dtype=int)
    alive = np.ones(len(pending), dtype=bool)

    def add_vertex(v):
        verts.append(v)
        dx = parr[:, 0] - v[0]
        dy = parr[:, 1] - v[1]
        d2 = dx * dx + dy * dy
        better = d2 < best
        best[better] = d2[better]
        best_v[better] = len(verts) - 1

    while alive.any():
        masked = np.where(alive, best, np.inf)
        i = int(masked.argmin())
        j = int(best_v[i])
        if best[i] > rm2:
            add_vertex(tuple(point_toward(verts[j], pending[i], d_max)))
        else:
            alive[i] = False
            add_vertex(pending[i])
    return verts


def _deployment(stations, d_cover, d_max) -> Deployment:
    return Deployment(tuple(map(tuple, stations)), d_cover, d_max)


def cdc_place(nodes: np.ndarray, bs, d_cover: float, d_max: float,
              alpha: float = ALPHA_DEFAULT, stages: dict | None = None,
              max_iters: int = 300, tol: float = 1e-3) -> Deployment:
    """Run the clustering construction on raw coordinates and radii."""
    nodes = _as_array(nodes)
    rc2 = d_cover * d_cover
    bs = (float(bs[0]), float(bs[1]))
    dx = nodes[:, 0] - bs[0]
    dy = nodes[:, 1] - bs[1]
    rest = nodes[dx * dx + dy * dy > rc2]
    if len(rest) == 0:
        dep = _deployment([bs], d_cover, d_max)
        if stages is not None:
            stages.update(clustering=dep, coverage=dep, connectivity=dep)
        return dep

    stats = isolation_stats(rest)
    k = choose_k(stats, alpha)
    model = kmeans(rest, k, initial_centroids(rest, stats, k), max_iters, tol)
    pads = [tuple(c) for c in model.centroids.tolist()]
    if stages is not None:
        stages["clustering"] = _deployment([bs] + pads, d_cover, d_max)

    d2 = pairwise_sq(rest, rest)
    np.fill_diagonal(d2, np.inf)
    uncovered = ~(pairwise_sq(rest, model.centroids) <= rc2).any(axis=1)
    while uncovered.any():
        ids = np.flatnonzero(uncovered)
        if len(ids) == 1:
            pick = int(ids[0])
        else:
            nn = d2[np.ix_(ids, ids)].min(axis=1)
            pick = int(ids[int(nn.argmax())])
        site = rest[pick]
        pads.append((float(site[0]), float(site[1])))
        ddx = rest[:, 0] - site[0]
        ddy = rest[:, 1] - site[1]
        uncovered &= ~(ddx * ddx + ddy * ddy <= rc2)
    if stages is not None:
        stages["coverage"] = _deployment([bs] + pads, d_cover, d_max)

    dep = _deployment(connect_stations(bs, pads, d_max), d_cover, d_max)
    if stages is not None:
        stages["connectivity"] = dep
    return dep


def cdc_solve(scenario: Scenario, params: UavParams | None = None,
              alpha: float = ALPHA_DEFAULT, stages: dict | None = None) -> Deployment:
    """Feasible initial deployment for ``scenario``.

    Pass a dict as ``stages`` to collect the intermediate deployments
    (``clustering``, ``coverage``, ``connectivity``).
    """
    d_cover, d_max = radii(params or UavParams())
    return cdc_place(scenario.node_array, scenario.bs, d_cover, d_max, alpha, stages)
