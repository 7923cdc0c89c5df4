"""Reduce a feasible deployment: prune redundant PADs, shift, then merge pairs.

Every step keeps both constraints satisfied and never adds a station. The BS
(index 0) is never moved, merged or removed.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from ._layout import Layout, pairwise_sq, reach_from
from .errors import CollinearPoints
from .geometry import circumcenter, min_enclosing_circle
from .scenario import Scenario
from .verify import Deployment, verify_deployment

log = logging.getLogger(__name__)

D_DELTA_DEFAULT = 30.0
MERGE_STRATEGIES = ("mec", "triangle")


@dataclass(frozen=True)
class ShiftConfig:
    d_delta: float = D_DELTA_DEFAULT
    max_steps: int | None = None  # None: ceil(d_max / d_delta)

    def __post_init__(self):
        if not self.d_delta > 0:
            raise ValueError("d_delta must be > 0")
        if self.max_steps is not None and self.max_steps < 0:
            raise ValueError("max_steps must be >= 0")

    def steps_for(self, d_max: float) -> int:
        if self.max_steps is not None:
            return self.max_steps
        return math.ceil(d_max / self.d_delta)


def _layout(dep: Deployment, scenario: Scenario) -> Layout:
    return Layout(scenario.node_array, dep.d_cover, dep.d_max)


def _stations(dep: Deployment) -> np.ndarray:
    return np.array(dep.stations, dtype=float).reshape(-1, 2)


def _rebuild(dep: Deployment, st: np.ndarray) -> Deployment:
    # keep the BS bit-identical to the input
    pts = [dep.stations[0]] + [tuple(p) for p in st[1:].tolist()]
    return dep.with_stations(pts)


def _assert_feasible(dep: Deployment, scenario: Scenario, what: str) -> None:
    rep = verify_deployment(dep, scenario)
    if not rep.ok:
        raise AssertionError(f"{what} broke feasibility: uncovered={rep.uncovered} "
                             f"disconnected={rep.disconnected} bs_ok={rep.bs_ok}")


def _effect_sizes(cov: np.ndarray) -> np.ndarray:
    sole = cov.sum(axis=1) == 1
    return (cov & sole[:, None]).sum(axis=0)


def prune_redundant(dep: Deployment, scenario: Scenario, debug: bool = False) -> Deployment:
    """Remove PADs whose removal keeps both constraints, one at a time.

    Candidates are PADs with an empty exclusive node set, tried in order of
    how few nodes they cover (lowest index on ties).
    """
    lay = _layout(dep, scenario)
    st = _stations(dep)
    while len(st) > 1:
        cov = lay.cover_matrix(st)
        effect = _effect_sizes(cov)
        sizes = cov.sum(axis=0)
        cands = sorted((j for j in range(1, len(st)) if effect[j] == 0),
                       key=lambda j: (sizes[j], j))
        for j in cands:
            rest = np.delete(st, j, axis=0)
            if lay.connected(rest):
                st = rest
                break
        else:
            break
        if debug:
            _assert_feasible(_rebuild(dep, st), scenario, "prune")
    return _rebuild(dep, st)


def shift_pads(dep: Deployment, scenario: Scenario, cfg: ShiftConfig | None = None,
               debug: bool = False) -> Deployment:
    """Step each PAD toward its nearest station while both constraints hold.

    PADs are visited by ascending exclusive-set size. Each moves in whole
    ``d_delta`` steps along the direction fixed when its turn starts; the first
    infeasible step is discarded. Redundant PADs are pruned afterwards.
    """
    cfg = cfg or ShiftConfig()
    lay = _layout(dep, scenario)
    st = _stations(dep)
    m = len(st)
    steps = cfg.steps_for(dep.d_max)
    done = np.zeros(m, dtype=bool)
    done[0] = True
    while not done.all():
        cov = lay.cover_matrix(st)
        effect = _effect_sizes(cov)
        todo = np.flatnonzero(~done)
        i = int(todo[np.lexsort((todo, effect[todo]))[0]])
        done[i] = True

        d2 = pairwise_sq(st[i:i + 1], st)[0]
        d2[i] = np.inf
        k = int(d2.argmin())
        gap = math.sqrt(d2[k])
        if gap == 0.0:
            continue
        start = st[i].copy()
        unit = (st[k] - start) / gap
        sole = cov.sum(axis=1) == 1
        required = np.flatnonzero(cov[:, i] & sole)
        others = np.delete(st, i, axis=0)
        others_linked = bool(reach_from(lay.adjacency(others)).all())

        accepted = 0
        for s in range(1, steps + 1):
            pos = start + (s * cfg.d_delta) * unit
            if not lay.covers(pos, required):
                break
            if others_linked:
                dx = others[:, 0] - pos[0]
                dy = others[:, 1] - pos[1]
                ok = bool((dx * dx + dy * dy <= lay.rm2).any())
            else:
                trial = st.copy()
                trial[i] = pos
                ok = lay.connected(trial)
            if not ok:
                break
            accepted = s
        if accepted:
            st[i] = start + (accepted * cfg.d_delta) * unit
            if debug:
                _assert_feasible(_rebuild(dep, st), scenario, "shift")
    return prune_redundant(_rebuild(dep, st), scenario, debug)


def _farthest_pair(pts: np.ndarray) -> tuple[int, int, float]:
    if len(pts) == 1:
        return 0, 0, 0.0
    d2 = pairwise_sq(pts, pts)
    d2[np.tril_indices(len(pts))] = -1.0
    flat = int(d2.argmax())
    a, b = divmod(flat, len(pts))
    return a, b, math.sqrt(d2[a, b])


def merge_candidates(group: np.ndarray, p_i, p_j, d_cover: float,
                     strategy: str = "mec") -> list[tuple[float, float]]:
    """Candidate sites for one PAD replacing ``p_i`` and ``p_j``.

    ``group`` holds the nodes only those two PADs cover. The first candidate
    is the midpoint of the group's farthest pair. The second is the centre of
    the group's minimum enclosing circle (``mec``) or the circumcentre of the
    farthest pair and the node nearest their midpoint (``triangle``).
    """
    if strategy not in MERGE_STRATEGIES:
        raise ValueError(f"unknown merge strategy {strategy!r}")
    if len(group) == 0:
        return [((p_i[0] + p_j[0]) / 2.0, (p_i[1] + p_j[1]) / 2.0)]
    a, b, span = _farthest_pair(group)
    if span > 2.0 * d_cover:
        return []
    sa, sb = group[a], group[b]
    mid = ((sa[0] + sb[0]) / 2.0, (sa[1] + sb[1]) / 2.0)
    out = [mid]
    if strategy == "mec":
        circ = min_enclosing_circle(group.tolist())
        if circ.radius <= d_cover:
            out.append(tuple(circ.center))
    else:
        rest = [c for c in range(len(group)) if c not in (a, b)]
        if rest:
            d = ((group[rest] - np.asarray(mid)) ** 2).sum(axis=1)
            c = rest[int(d.argmin())]
            try:
                out.append(tuple(circumcenter(sa, sb, group[c]).center))
            except CollinearPoints:
                pass
    return out


def combine_pads(dep: Deployment, scenario: Scenario, strategy: str = "mec",
                 until_fixed_point: bool = False, debug: bool = False) -> Deployment:
    """Try to merge each PAD with a neighbouring PAD into a single new one.

    PADs are taken by ascending exclusive-set size; neighbours (other PADs
    within ``d_max``) nearest first. A merge commits when the replacement
    keeps both constraints. Merged PADs join the queue as untried.
    """
    lay = _layout(dep, scenario)
    st = _stations(dep)
    tried = np.zeros(len(st), dtype=bool)
    tried[0] = True
    merges = 0
    while True:
        if tried.all():
            if until_fixed_point and merges:
                merges = 0
                tried[1:] = False
                continue
            break
        cov = lay.cover_matrix(st)
        effect = _effect_sizes(cov)
        todo = np.flatnonzero(~tried)
        i = int(todo[np.lexsort((todo, effect[todo]))[0]])
        tried[i] = True

        d2 = pairwise_sq(st[i:i + 1], st)[0]
        nbrs = [j for j in range(1, len(st)) if j != i and d2[j] <= lay.rm2]
        nbrs.sort(key=lambda j: (d2[j], j))
        for j in nbrs:
            keep = np.ones(len(st), dtype=bool)
            keep[[i, j]] = False
            group_ids = np.flatnonzero(~cov[:, keep].any(axis=1))
            group = lay.nodes[group_ids]
            committed = False
            for cand in merge_candidates(group, st[i], st[j], dep.d_cover, strategy):
                if not lay.covers(cand, group_ids):
                    continue
                trial = np.vstack([st[keep], np.asarray(cand)[None, :]])
                if lay.connected(trial):
                    st = trial
                    tried = np.append(tried[keep], False)
                    merges += 1
                    committed = True
                    break
            if committed:
                if debug:
                    _assert_feasible(_rebuild(dep, st), scenario, "combine")
                break
    return _rebuild(dep, st)


def dsc_optimize(dep: Deployment, scenario: Scenario, cfg: ShiftConfig | None = None,
                 merge_strategy: str = "mec", combine_until_fixed_point: bool = False,
                 stages: dict | None = None, debug: bool = False) -> Deployment:
    """prune -> shift (+prune) -> prune -> combine -> prune.

    ``stages`` collects ``prune``, ``shift`` and ``combine`` snapshots.
    """
    start = dep.num_pads
    dep = prune_redundant(dep, scenario, debug)
    if stages is not None:
        stages["prune"] = dep
    dep = shift_pads(dep, scenario, cfg, debug)
    dep = prune_redundant(dep, scenario, debug)
    if stages is not None:
        stages["shift"] = dep
    dep = combine_pads(dep, scenario, merge_strategy, combine_until_fixed_point, debug)
    dep = prune_redundant(dep, scenario, debug)
    if stages is not None:
        stages["combine"] = dep
    log.debug("dsc: %d -> %d PADs", start, dep.num_pads)
    return dep
