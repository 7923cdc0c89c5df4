"""Parameter sweeps over generated scenarios, with CSV and SVG output.

Every (value, trial) cell gets its own scenario seed from
:func:`derive_seed`. The seed does not depend on the algorithm or the BS mode,
so algorithms and BS modes are compared on the same node sets.
"""
from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .baseline_dc import dc_place
from .cdc import ALPHA_DEFAULT, cdc_place
from .dsc import D_DELTA_DEFAULT, ShiftConfig, dsc_optimize
from .energy import UavParams, radii
from .errors import ConfigError
from .scenario import BS_MODES, DISTRIBUTIONS, Scenario, generate
from .verify import verify_deployment

log = logging.getLogger(__name__)

ALGORITHMS = ("cdc", "cdc-dsc", "dc")
SWEPT_PARAMETERS = ("region_side", "node_count", "e_max")
CSV_HEADER = ["param", "algorithm", "bs_mode", "seed", "pads", "wall_ms"]


def derive_seed(base_seed: int, value, trial: int) -> int:
    """64-bit scenario seed: base_seed XOR sha256("<float(value)!r>|<trial>")[:8]."""
    digest = hashlib.sha256(f"{float(value)!r}|{trial}".encode()).digest()
    return (base_seed ^ int.from_bytes(digest[:8], "big")) & 0xFFFF_FFFF_FFFF_FFFF


@dataclass(frozen=True)
class SweepSpec:
    swept_parameter: str
    values: tuple
    distribution: str = "uniform"
    bs_mode: tuple = ("center",)
    algorithms: tuple = ("cdc-dsc", "dc")
    trials: int = 10
    base_seed: int = 0
    region_side: float = 16000.0
    node_count: int = 200
    groups: int = 3
    alpha: float = ALPHA_DEFAULT
    d_delta: float = D_DELTA_DEFAULT
    merge_strategy: str = "mec"
    record_timing: bool = False

    def __post_init__(self):
        if isinstance(self.bs_mode, str):
            object.__setattr__(self, "bs_mode", (self.bs_mode,))
        object.__setattr__(self, "values", tuple(self.values))
        object.__setattr__(self, "bs_mode", tuple(self.bs_mode))
        object.__setattr__(self, "algorithms", tuple(self.algorithms))
        if self.swept_parameter not in SWEPT_PARAMETERS:
            raise ConfigError(f"unknown swept_parameter {self.swept_parameter!r}")
        if not self.values:
            raise ConfigError("values must be nonempty")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.distribution not in DISTRIBUTIONS:
            raise ConfigError(f"unknown distribution {self.distribution!r}")
        for m in self.bs_mode:
            if m not in BS_MODES:
                raise ConfigError(f"unknown bs_mode {m!r}")
        for a in self.algorithms:
            if a not in ALGORITHMS:
                raise ConfigError(f"unknown algorithm {a!r}; expected one of {ALGORITHMS}")

    @classmethod
    def from_dict(cls, d: dict) -> "SweepSpec":
        known = set(cls.__dataclass_fields__)
        extra = set(d) - known
        if extra:
            raise ConfigError(f"unknown sweep spec fields: {sorted(extra)}")
        try:
            return cls(**d)
        except TypeError as e:
            raise ConfigError(str(e)) from e


def load_sweep_spec(path) -> SweepSpec:
    p = Path(path)
    try:
        data = json.loads(p.read_text())
    except OSError as e:
        raise ConfigError(f"cannot read sweep spec {p}: {e}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"{p}:{e.lineno}:{e.colno}: invalid JSON: {e.msg}") from e
    if not isinstance(data, dict):
        raise ConfigError(f"{p}: top level must be an object")
    return SweepSpec.from_dict(data)


@dataclass(frozen=True)
class SweepRow:
    param: float
    algorithm: str
    bs_mode: str
    seed: int
    pads: int
    wall_ms: float = 0.0
    ok: bool = True

    def sort_key(self):
        return (self.param, self.algorithm, self.bs_mode, self.seed)


@dataclass(frozen=True)
class Aggregate:
    mean: float
    min: int
    max: int
    count: int


@dataclass
class SweepReport:
    swept_parameter: str
    rows: list = field(default_factory=list)
    failures: list = field(default_factory=list)

    def aggregate(self) -> dict:
        groups: dict = {}
        for r in self.rows:
            groups.setdefault((r.param, r.algorithm, r.bs_mode), []).append(r.pads)
        return {k: Aggregate(statistics.fmean(v), min(v), max(v), len(v))
                for k, v in sorted(groups.items())}

    def means(self, algorithm: str, bs_mode: str = "center") -> list[tuple[float, float]]:
        return [(k[0], a.mean) for k, a in self.aggregate().items()
                if k[1] == algorithm and k[2] == bs_mode]


def _scenario_for(spec: SweepSpec, value, seed: int, bs_mode: str) -> Scenario:
    side = float(value) if spec.swept_parameter == "region_side" else spec.region_side
    n = int(value) if spec.swept_parameter == "node_count" else spec.node_count
    return generate(spec.distribution, n, side, bs_mode, seed, spec.groups)


def _params_for(spec: SweepSpec, base: UavParams, value) -> UavParams:
    if spec.swept_parameter == "e_max":
        return base.replace(e_max=float(value))
    return base


def solve(algorithm: str, scenario: Scenario, params: UavParams,
          alpha: float = ALPHA_DEFAULT, d_delta: float = D_DELTA_DEFAULT,
          merge_strategy: str = "mec", stages: dict | None = None):
    """Run one named algorithm and return its Deployment."""
    d_cover, d_max = radii(params)
    if algorithm == "dc":
        return dc_place(scenario, d_cover, d_max)
    if algorithm not in ("cdc", "cdc-dsc"):
        raise ConfigError(f"unknown algorithm {algorithm!r}; expected one of {ALGORITHMS}")
    dep = cdc_place(scenario.node_array, scenario.bs, d_cover, d_max, alpha, stages)
    if algorithm == "cdc-dsc":
        dep = dsc_optimize(dep, scenario, ShiftConfig(d_delta), merge_strategy, stages=stages)
    return dep


def _run_cell(spec: SweepSpec, base: UavParams, value, trial: int, bs_mode: str):
    seed = derive_seed(spec.base_seed, value, trial)
    scenario = _scenario_for(spec, value, seed, bs_mode)
    params = _params_for(spec, base, value)
    d_cover, d_max = radii(params)
    if bs_mode == "isolated":
        near = np.hypot(*(scenario.node_array - np.asarray(scenario.bs)).T).min()
        if near <= d_max:
            log.warning("isolated BS is only %.1f m from a node (d_max %.1f m) "
                        "at %s=%r seed=%d", near, d_max, spec.swept_parameter, value, seed)
    rows, failures = [], []
    cdc_result = None
    for algo in spec.algorithms:
        # cdc-dsc reuses the cdc deployment; its time includes the cdc phase
        elapsed = 0.0
        if cdc_result is None and algo != "dc":
            t0 = time.perf_counter()
            dep = cdc_place(scenario.node_array, scenario.bs, d_cover, d_max, spec.alpha)
            cdc_result = (dep, time.perf_counter() - t0)
        t0 = time.perf_counter()
        if algo == "dc":
            dep = dc_place(scenario, d_cover, d_max)
        else:
            dep, elapsed = cdc_result
            if algo == "cdc-dsc":
                dep = dsc_optimize(dep, scenario, ShiftConfig(spec.d_delta), spec.merge_strategy)
        elapsed += time.perf_counter() - t0
        wall = elapsed * 1e3 if spec.record_timing else 0.0
        rep = verify_deployment(dep, scenario)
        if not rep.ok:
            failures.append((value, algo, bs_mode, seed,
                             f"uncovered={rep.uncovered} disconnected={rep.disconnected}"))
            log.error("constraint violation: %s", failures[-1])
        rows.append(SweepRow(float(value), algo, bs_mode, seed, dep.num_pads, wall, rep.ok))
    return rows, failures


def run_sweep(spec: SweepSpec, params_base: UavParams | None = None,
              workers: int = 1) -> SweepReport:
    """Solve and verify every (value, trial, bs_mode, algorithm) combination.

    With ``workers > 1`` cells run in a process pool; rows are sorted by
    (param, algorithm, bs_mode, seed) either way.
    """
    base = params_base or UavParams()
    jobs = [(v, t, m) for v in spec.values for t in range(spec.trials) for m in spec.bs_mode]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_cell, *zip(*[(spec, base, v, t, m) for v, t, m in jobs])))
    else:
        results = [_run_cell(spec, base, v, t, m) for v, t, m in jobs]
    report = SweepReport(spec.swept_parameter)
    for rows, fails in results:
        report.rows.extend(rows)
        report.failures.extend(fails)
    report.rows.sort(key=SweepRow.sort_key)
    return report


@dataclass(frozen=True)
class PairedDiff:
    param: float
    algorithm: str
    seed: int
    center: int
    isolated: int

    @property
    def diff(self) -> int:
        return self.isolated - self.center


def compare_bs_modes(spec: SweepSpec, params_base: UavParams | None = None,
                     workers: int = 1) -> list[PairedDiff]:
    """Run ``spec`` under both BS placements on matched seeds."""
    report = run_sweep(replace(spec, bs_mode=("center", "isolated")), params_base, workers)
    by_key = {(r.param, r.algorithm, r.seed, r.bs_mode): r.pads for r in report.rows}
    return [PairedDiff(p, a, s, by_key[(p, a, s, "center")], by_key[(p, a, s, "isolated")])
            for (p, a, s, m) in sorted(by_key) if m == "center"]


def mean_paired_diff(pairs: list[PairedDiff], algorithm: str) -> float:
    return statistics.fmean(p.diff for p in pairs if p.algorithm == algorithm)


def _fmt_param(v: float) -> str:
    return str(int(v)) if float(v).is_integer() else repr(float(v))


def dumps_csv(report: SweepReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in sorted(report.rows, key=SweepRow.sort_key):
        w.writerow([_fmt_param(r.param), r.algorithm, r.bs_mode, r.seed, r.pads, f"{r.wall_ms:.3f}"])
    return buf.getvalue()


def emit_csv(report: SweepReport, path) -> None:
    Path(path).write_text(dumps_csv(report))


def parse_csv(text: str, swept_parameter: str = "param") -> SweepReport:
    rd = csv.reader(io.StringIO(text))
    header = next(rd, None)
    if header != CSV_HEADER:
        raise ConfigError(f"unexpected CSV header {header!r}")
    rows = [SweepRow(float(p), a, m, int(s), int(n), float(w)) for p, a, m, s, n, w in rd]
    return SweepReport(swept_parameter, rows)


def read_csv(path, swept_parameter: str = "param") -> SweepReport:
    return parse_csv(Path(path).read_text(), swept_parameter)


def emit_charts(report: SweepReport, path) -> None:
    """Mean PAD count vs swept value, one line per algorithm, one panel per BS mode."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    agg = report.aggregate()
    modes = sorted({k[2] for k in agg}) or ["center"]
    with matplotlib.rc_context({"svg.hashsalt": "mndp", "svg.fonttype": "none"}):
        fig, axes = plt.subplots(1, len(modes), figsize=(5.5 * len(modes), 4), squeeze=False)
        for ax, mode in zip(axes[0], modes):
            for algo in sorted({k[1] for k in agg}):
                pts = [(k[0], a.mean) for k, a in agg.items() if k[1] == algo and k[2] == mode]
                if pts:
                    xs, ys = zip(*pts)
                    ax.plot(xs, ys, marker="o", label=algo)
            ax.set_xlabel(report.swept_parameter)
            ax.set_ylabel("mean PADs")
            ax.set_title(f"BS {mode}")
            ax.grid(alpha=0.3)
            ax.legend()
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
