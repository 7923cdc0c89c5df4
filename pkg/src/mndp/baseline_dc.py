"""Grid baseline: one PAD at the centre of every occupied square cell.

The nominal cell side is the largest square a single ``d_cover`` disk covers,
``sqrt(2) * d_cover``. The grid is anchored at the origin. A leftover strip
narrower than ``SLIVER_FRACTION`` of a cell is folded into the last row and
column rather than given its own cells. The cells stretch slightly, and any
node the stretch leaves outside its cell disk gets a PAD of its own. The
same relay routine as the clustering solver then connects the PADs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .cdc import connect_stations
from .energy import UavParams, radii
from .scenario import Scenario
from .verify import Deployment

# Without the fold, d_cover = 2828.0 m gives a 3999.40 m cell and a 2.4 m
# strip on a 16000 m side, which turns a 4x4 grid into 5x5.
SLIVER_FRACTION = 1e-3


@dataclass
class CellGrid:
    cell_side: float
    rows: int
    cols: int
    occupied: dict = field(default_factory=dict)

    def center(self, cell: tuple[int, int]) -> tuple[float, float]:
        r, c = cell
        return ((c + 0.5) * self.cell_side, (r + 0.5) * self.cell_side)


def cells_per_axis(region_side: float, d_cover: float) -> int:
    ratio = region_side / (math.sqrt(2.0) * d_cover)
    return max(1, math.ceil(ratio - SLIVER_FRACTION))


def build_grid(scenario: Scenario, d_cover: float) -> CellGrid:
    k = cells_per_axis(scenario.region_side, d_cover)
    side = scenario.region_side / k
    pts = scenario.node_array
    col = np.minimum((pts[:, 0] // side).astype(int), k - 1)
    row = np.minimum((pts[:, 1] // side).astype(int), k - 1)
    occupied: dict = {}
    for r, c in zip(row.tolist(), col.tolist()):
        occupied[(r, c)] = occupied.get((r, c), 0) + 1
    return CellGrid(side, k, k, occupied)


def dc_place(scenario: Scenario, d_cover: float, d_max: float) -> Deployment:
    grid = build_grid(scenario, d_cover)
    pads = [grid.center(cell) for cell in sorted(grid.occupied)]
    rc2 = d_cover * d_cover
    pts = scenario.node_array
    arr = np.array(pads, dtype=float).reshape(-1, 2)
    dx = pts[:, None, 0] - arr[None, :, 0]
    dy = pts[:, None, 1] - arr[None, :, 1]
    bx = pts[:, 0] - scenario.bs[0]
    by = pts[:, 1] - scenario.bs[1]
    covered = (dx * dx + dy * dy <= rc2).any(axis=1) | (bx * bx + by * by <= rc2)
    while not covered.all():
        i = int(np.flatnonzero(~covered)[0])
        pads.append((float(pts[i, 0]), float(pts[i, 1])))
        ex = pts[:, 0] - pts[i, 0]
        ey = pts[:, 1] - pts[i, 1]
        covered |= ex * ex + ey * ey <= rc2
    stations = connect_stations(scenario.bs, pads, d_max)
    return Deployment(tuple(stations), d_cover, d_max)


def dc_solve(scenario: Scenario, params: UavParams | None = None) -> Deployment:
    d_cover, d_max = radii(params or UavParams())
    return dc_place(scenario, d_cover, d_max)
