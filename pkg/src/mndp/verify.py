"""Independent checks of the two deployment constraints.

Coverage: every node lies within ``d_cover`` of some charging station.
Connectivity: stations joined by edges of length ``<= d_max`` form one
connected graph. Both boundaries are inclusive. Distances are compared
squared.

These routines are deliberately plain (per-pair loops, union-find) and share
no code with the solvers' vectorized feasibility checks, so they can referee
solver output.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import BsNotRemovable, ParseError
from .geometry import Point, as_point, dist_sq
from .scenario import Scenario


@dataclass(frozen=True)
class Deployment:
    """Charging stations with the BS at index 0, plus the radii they serve."""

    stations: tuple[Point, ...]
    d_cover: float
    d_max: float

    def __post_init__(self):
        if not self.stations:
            raise ValueError("a deployment contains at least the BS")
        object.__setattr__(self, "stations", tuple(as_point(p) for p in self.stations))
        if not 0 < self.d_cover < self.d_max / 2:
            raise ValueError(f"need 0 < d_cover < d_max/2, got {self.d_cover}, {self.d_max}")

    @property
    def bs(self) -> Point:
        return self.stations[0]

    @property
    def pads(self) -> tuple[Point, ...]:
        return self.stations[1:]

    @property
    def num_pads(self) -> int:
        return len(self.stations) - 1

    def without(self, station_id: int) -> "Deployment":
        st = self.stations[:station_id] + self.stations[station_id + 1:]
        return Deployment(st, self.d_cover, self.d_max)

    def with_stations(self, stations) -> "Deployment":
        return Deployment(tuple(stations), self.d_cover, self.d_max)

    def to_dict(self) -> dict:
        return {
            "d_cover": self.d_cover,
            "d_max": self.d_max,
            "stations": [list(p) for p in self.stations],
        }


@dataclass(frozen=True)
class CoverageIndex:
    by_station: tuple[frozenset, ...]
    by_node: tuple[frozenset, ...]


def covered_set(dep: Deployment, scenario: Scenario) -> CoverageIndex:
    r2 = dep.d_cover * dep.d_cover
    by_station = [set() for _ in dep.stations]
    by_node = [set() for _ in scenario.nodes]
    for j, p in enumerate(dep.stations):
        for i, s in enumerate(scenario.nodes):
            if dist_sq(s, p) <= r2:
                by_station[j].add(i)
                by_node[i].add(j)
    return CoverageIndex(tuple(map(frozenset, by_station)), tuple(map(frozenset, by_node)))


def check_coverage(dep: Deployment, scenario: Scenario) -> list[int]:
    """Ids of uncovered nodes; an empty list means the constraint holds."""
    r2 = dep.d_cover * dep.d_cover
    return [i for i, s in enumerate(scenario.nodes)
            if not any(dist_sq(s, p) <= r2 for p in dep.stations)]


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, a: int) -> int:
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def check_connectivity(dep: Deployment) -> list[int]:
    """Ids of stations outside the BS's component; empty means connected."""
    st = dep.stations
    r2 = dep.d_max * dep.d_max
    uf = _UnionFind(len(st))
    for i in range(len(st)):
        for j in range(i + 1, len(st)):
            if dist_sq(st[i], st[j]) <= r2:
                uf.union(i, j)
    root = uf.find(0)
    return [i for i in range(len(st)) if uf.find(i) != root]


def check_bs(dep: Deployment, scenario: Scenario) -> bool:
    return dep.bs == scenario.bs


def is_feasible(dep: Deployment, scenario: Scenario) -> bool:
    return (check_bs(dep, scenario) and not check_coverage(dep, scenario)
            and not check_connectivity(dep))


def effect_set(dep: Deployment, scenario: Scenario, station_id: int) -> frozenset:
    """Nodes covered by ``station_id`` and by no other station."""
    idx = covered_set(dep, scenario)
    return frozenset(i for i in idx.by_station[station_id] if idx.by_node[i] == {station_id})


def pair_exclusive_set(dep: Deployment, scenario: Scenario, i: int, j: int) -> frozenset:
    """Nodes not covered by any station other than ``i`` and ``j``.

    This is a literal set difference against all *other* stations, so on a
    deployment that violates coverage it also returns nodes covered by
    neither ``i`` nor ``j``.
    """
    if i == j:
        raise ValueError("i and j must differ")
    if 0 in (i, j):
        raise BsNotRemovable("the BS cannot take part in a pair merge")
    idx = covered_set(dep, scenario)
    others = set()
    for k, cov in enumerate(idx.by_station):
        if k not in (i, j):
            others |= cov
    return frozenset(set(range(scenario.n)) - others)


def is_redundant(dep: Deployment, scenario: Scenario, station_id: int) -> bool:
    if station_id == 0:
        raise BsNotRemovable("the BS (station 0) is never removable")
    rest = dep.without(station_id)
    return not check_coverage(rest, scenario) and not check_connectivity(rest)


@dataclass
class VerifyReport:
    bs_ok: bool
    uncovered: list[int]
    disconnected: list[int]

    @property
    def ok(self) -> bool:
        return self.bs_ok and not self.uncovered and not self.disconnected


def verify_deployment(dep: Deployment, scenario: Scenario) -> VerifyReport:
    return VerifyReport(check_bs(dep, scenario), check_coverage(dep, scenario),
                        check_connectivity(dep))


def dumps_deployment(dep: Deployment) -> str:
    return json.dumps(dep.to_dict(), separators=(",", ":")) + "\n"


def save_deployment(dep: Deployment, path) -> None:
    Path(path).write_text(dumps_deployment(dep))


def parse_deployment(text: str, source: str = "<string>") -> Deployment:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"{source}:{e.lineno}:{e.colno}: invalid JSON: {e.msg}") from e
    if not isinstance(data, dict):
        raise ParseError(f"{source}: top level must be an object")
    for key in ("d_cover", "d_max", "stations"):
        if key not in data:
            raise ParseError(f"{source}: missing field {key!r}")
    st = data["stations"]
    if not isinstance(st, list) or not st:
        raise ParseError(f"{source}: field 'stations' must be a nonempty list")
    pts = []
    for k, v in enumerate(st):
        if not (isinstance(v, list) and len(v) == 2
                and all(isinstance(c, (int, float)) and not isinstance(c, bool)
                        and math.isfinite(c) for c in v)):
            raise ParseError(f"{source}: field 'stations'[{k}]: expected [x, y], got {v!r}")
        pts.append((float(v[0]), float(v[1])))
    try:
        return Deployment(tuple(pts), float(data["d_cover"]), float(data["d_max"]))
    except (TypeError, ValueError) as e:
        raise ParseError(f"{source}: {e}") from e


def load_deployment(path) -> Deployment:
    p = Path(path)
    return parse_deployment(p.read_text(), str(p))


def station_array(dep: Deployment) -> np.ndarray:
    return np.array(dep.stations, dtype=float).reshape(-1, 2)
