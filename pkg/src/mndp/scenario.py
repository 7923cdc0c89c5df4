"""Sensor-field generators and the scenario file format.

Randomness comes from numpy's PCG64 seeded through ``SeedSequence``. The
Gaussian-mixture generator spawns one child stream per group, in group order,
so the nodes of group ``g`` depend only on ``(seed, g)``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ParseError
from .geometry import Point, as_point

BS_MODES = ("center", "isolated")
DISTRIBUTIONS = ("uniform", "gaussian3")

# Isolated BS sits on the region diagonal at this multiple of the side.
ISOLATED_BS_FACTOR = 1.25
# Per-group standard deviation range, as fractions of the side.
SIGMA_RANGE = (1 / 20, 1 / 8)


@dataclass(frozen=True)
class Scenario:
    region_side: float
    nodes: tuple[Point, ...]
    bs: Point
    seed: int = 0
    _array: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.region_side > 0:
            raise ValueError("region_side must be > 0")
        if not self.nodes:
            raise ValueError("scenario needs at least one node")
        nodes = tuple(as_point(p) for p in self.nodes)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "bs", as_point(self.bs))
        arr = np.array(nodes, dtype=float).reshape(-1, 2)
        if arr.min() < 0 or arr.max() > self.region_side:
            raise ValueError("all nodes must lie inside [0, region_side]^2")
        arr.setflags(write=False)
        object.__setattr__(self, "_array", arr)

    @property
    def n(self) -> int:
        return len(self.nodes)

    @property
    def node_array(self) -> np.ndarray:
        """Read-only (N, 2) array of node coordinates."""
        return self._array

    def to_dict(self) -> dict:
        return {
            "region_side": self.region_side,
            "seed": self.seed,
            "bs": list(self.bs),
            "nodes": [list(p) for p in self.nodes],
        }


def bs_location(region_side: float, bs_mode: str) -> Point:
    if bs_mode == "center":
        return Point(region_side / 2.0, region_side / 2.0)
    if bs_mode == "isolated":
        return Point(ISOLATED_BS_FACTOR * region_side, ISOLATED_BS_FACTOR * region_side)
    raise ValueError(f"unknown bs_mode {bs_mode!r}; expected one of {BS_MODES}")


def gen_uniform(n: int, region_side: float, bs_mode: str = "center", seed: int = 0) -> Scenario:
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    pts = rng.uniform(0.0, region_side, size=(n, 2))
    return Scenario(region_side, tuple(map(tuple, pts.tolist())), bs_location(region_side, bs_mode), seed)


def gen_gaussian_mixture(n: int, region_side: float, groups: int = 3,
                         bs_mode: str = "center", seed: int = 0) -> Scenario:
    """Isotropic Gaussian groups with random means and spreads.

    Group sizes are ``n // groups`` with the remainder on the last group.
    Samples that fall outside the square are redrawn.
    """
    if n < 1 or groups < 1:
        raise ValueError("n and groups must be >= 1")
    if groups > n:
        raise ValueError("more groups than nodes")
    size = n // groups
    sizes = [size] * (groups - 1) + [n - size * (groups - 1)]
    lo, hi = SIGMA_RANGE
    out: list[np.ndarray] = []
    for count, child in zip(sizes, np.random.SeedSequence(seed).spawn(groups)):
        rng = np.random.default_rng(child)
        mean = rng.uniform(0.0, region_side, size=2)
        sigma = rng.uniform(lo * region_side, hi * region_side)
        pts = np.empty((0, 2))
        while len(pts) < count:
            draw = rng.normal(mean, sigma, size=(count - len(pts), 2))
            keep = np.all((draw >= 0.0) & (draw <= region_side), axis=1)
            pts = np.vstack([pts, draw[keep]])
        out.append(pts)
    allpts = np.vstack(out)
    return Scenario(region_side, tuple(map(tuple, allpts.tolist())), bs_location(region_side, bs_mode), seed)


def generate(distribution: str, n: int, region_side: float, bs_mode: str = "center",
             seed: int = 0, groups: int = 3) -> Scenario:
    if distribution == "uniform":
        return gen_uniform(n, region_side, bs_mode, seed)
    if distribution == "gaussian3":
        return gen_gaussian_mixture(n, region_side, groups, bs_mode, seed)
    raise ValueError(f"unknown distribution {distribution!r}; expected one of {DISTRIBUTIONS}")


def dumps_scenario(s: Scenario) -> str:
    return json.dumps(s.to_dict(), indent=None, separators=(",", ":")) + "\n"


def save_scenario(s: Scenario, path) -> None:
    Path(path).write_text(dumps_scenario(s))


def _coord_pair(value, where: str) -> tuple[float, float]:
    if (not isinstance(value, (list, tuple)) or len(value) != 2
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)):
        raise ParseError(f"{where}: expected [x, y] pair of numbers, got {value!r}")
    x, y = float(value[0]), float(value[1])
    if not (math.isfinite(x) and math.isfinite(y)):
        raise ParseError(f"{where}: non-finite coordinate")
    return x, y


def parse_scenario(text: str, source: str = "<string>") -> Scenario:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"{source}:{e.lineno}:{e.colno}: invalid JSON: {e.msg}") from e
    if not isinstance(data, dict):
        raise ParseError(f"{source}: top level must be an object")
    for key in ("region_side", "bs", "nodes"):
        if key not in data:
            raise ParseError(f"{source}: missing field {key!r}")
    side = data["region_side"]
    if not isinstance(side, (int, float)) or isinstance(side, bool) or not side > 0:
        raise ParseError(f"{source}: field 'region_side' must be a positive number")
    seed = data.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
        raise ParseError(f"{source}: field 'seed' must be a non-negative integer")
    bs = _coord_pair(data["bs"], f"{source}: field 'bs'")
    raw = data["nodes"]
    if not isinstance(raw, list):
        raise ParseError(f"{source}: field 'nodes' must be a list")
    if not raw:
        raise ParseError(f"{source}: field 'nodes' is empty")
    nodes = tuple(_coord_pair(v, f"{source}: field 'nodes'[{i}]") for i, v in enumerate(raw))
    try:
        return Scenario(float(side), nodes, bs, seed)
    except ValueError as e:
        raise ParseError(f"{source}: {e}") from e


def load_scenario(path) -> Scenario:
    p = Path(path)
    return parse_scenario(p.read_text(), str(p))
