"""Layered configuration: built-in defaults < config file < explicit overrides."""
from __future__ import annotations

import copy
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .energy import UavParams
from .errors import ConfigError, InfeasibleParams

SECTIONS = ("uav", "solver", "sweep")


def builtin_defaults() -> dict:
    text = resources.files("mndp").joinpath("defaults.json").read_text()
    return {k: v for k, v in json.loads(text).items() if not k.startswith("_")}


def merge(base: dict, layer: dict, source: str) -> dict:
    out = copy.deepcopy(base)
    for section, values in layer.items():
        if section.startswith("_"):
            continue
        if section not in out:
            raise ConfigError(f"{source}: unknown section {section!r}")
        if not isinstance(values, dict):
            raise ConfigError(f"{source}: section {section!r} must be an object")
        for key, v in values.items():
            if key not in out[section]:
                raise ConfigError(f"{source}: unknown key {section}.{key}")
            out[section][key] = v
    return out


@dataclass(frozen=True)
class Config:
    uav: UavParams
    alpha: float
    d_delta: float
    merge_strategy: str
    combine_until_fixed_point: bool
    region_side: float
    node_count: int
    distribution: str
    groups: int
    bs_mode: str
    trials: int
    base_seed: int
    raw: dict

    @classmethod
    def from_dict(cls, d: dict) -> "Config":
        try:
            uav = UavParams(**{k: float(v) for k, v in d["uav"].items()})
        except (TypeError, ValueError, InfeasibleParams) as e:
            raise ConfigError(f"bad uav section: {e}") from e
        s, w = d["solver"], d["sweep"]
        try:
            return cls(uav=uav, alpha=float(s["alpha"]), d_delta=float(s["d_delta"]),
                       merge_strategy=str(s["merge_strategy"]),
                       combine_until_fixed_point=bool(s["combine_until_fixed_point"]),
                       region_side=float(w["region_side"]), node_count=int(w["node_count"]),
                       distribution=str(w["distribution"]), groups=int(w["groups"]),
                       bs_mode=str(w["bs_mode"]), trials=int(w["trials"]),
                       base_seed=int(w["base_seed"]), raw=d)
        except (TypeError, ValueError) as e:
            raise ConfigError(f"bad config value: {e}") from e


def load_config(path=None, overrides: dict | None = None) -> Config:
    """Build a Config from the built-ins, an optional JSON file, then overrides.

    ``overrides`` uses the file's shape, e.g. ``{"solver": {"alpha": 0.5}}``;
    entries whose value is None are ignored so unset CLI flags fall through.
    """
    cfg = builtin_defaults()
    if path is not None:
        p = Path(path)
        try:
            layer = json.loads(p.read_text())
        except OSError as e:
            raise ConfigError(f"cannot read config {p}: {e}") from e
        except json.JSONDecodeError as e:
            raise ConfigError(f"{p}:{e.lineno}:{e.colno}: invalid JSON: {e.msg}") from e
        if not isinstance(layer, dict):
            raise ConfigError(f"{p}: top level must be an object")
        cfg = merge(cfg, layer, str(p))
    if overrides:
        clean = {sec: {k: v for k, v in vals.items() if v is not None}
                 for sec, vals in overrides.items()}
        cfg = merge(cfg, clean, "command line")
    return Config.from_dict(cfg)
