"""UAV energy model and the two radii derived from it.

``d_max`` is the distance a fully charged UAV can fly. ``d_cover`` is the
farthest a node may sit from a charging station such that the UAV can fly out,
hover while charging it, and fly back.

Only the battery capacity ``e_max`` is a reference value (7.8e4 J). Every
other default below is a calibration choice: speed, powers, charge time,
node battery and efficiency are picked so that ``d_cover`` comes out at
2828.0 m, about half the diagonal of a 4000 m square.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields

from .errors import InfeasibleParams


@dataclass(frozen=True)
class UavParams:
    e_max: float = 78000.0      # J, battery capacity (reference value)
    v_u: float = 10.0           # m/s, cruise speed (calibrated)
    p_mov: float = 120.0        # W, moving power (calibrated)
    p_blade: float = 80.0       # W, blade-profile part of hover power (calibrated)
    p_induced: float = 70.0     # W, induced part of hover power (calibrated)
    delta: float = 60.0         # s, time to fully charge one node (calibrated)
    e_node: float = 338.4       # J, node battery capacity (calibrated)
    eta: float = 0.3            # wireless transfer efficiency (calibrated)

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if not math.isfinite(v) or v < 0:
                raise InfeasibleParams(f"{f.name} must be finite and >= 0, got {v!r}")
        if self.p_mov <= 0 or self.v_u <= 0:
            raise InfeasibleParams("p_mov and v_u must be > 0")
        if not 0 < self.eta <= 1:
            raise InfeasibleParams(f"eta must be in (0, 1], got {self.eta!r}")

    def replace(self, **changes) -> "UavParams":
        return UavParams(**{**asdict(self), **changes})

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class FlightEnergy:
    e_mov: float
    e_hov: float
    e_charge: float
    e_consume: float


def hover_power(params: UavParams) -> float:
    return params.p_blade + params.p_induced


def flight_energy(params: UavParams, t_m: float, n_charged: int, e_rec: float) -> FlightEnergy:
    """Energy spent on one charging flight.

    Args:
        t_m: seconds spent moving.
        n_charged: number of nodes charged (each hovers for ``delta`` s).
        e_rec: joules delivered to the charged nodes.
    """
    if t_m < 0 or n_charged < 0 or e_rec < 0:
        raise ValueError("t_m, n_charged and e_rec must be non-negative")
    e_mov = params.p_mov * t_m
    e_hov = hover_power(params) * (n_charged * params.delta)
    e_charge = e_rec / params.eta
    return FlightEnergy(e_mov, e_hov, e_charge, (e_mov + e_hov) + e_charge)


def d_max(params: UavParams) -> float:
    return params.e_max / params.p_mov * params.v_u


def d_cover(params: UavParams) -> float:
    """Charging coverage radius: half the range left after one node's charge."""
    budget = params.e_max - hover_power(params) * params.delta - params.e_node / params.eta
    if budget <= 0:
        raise InfeasibleParams(
            f"battery {params.e_max} J cannot cover hover + charge cost "
            f"({params.e_max - budget:.6g} J)"
        )
    r = 0.5 * budget / params.p_mov * params.v_u
    if not r < 0.5 * d_max(params):
        # zero hover and charge cost leaves no margin to return after charging
        raise InfeasibleParams("d_cover must be strictly below d_max / 2")
    return r


def radii(params: UavParams) -> tuple[float, float]:
    """(d_cover, d_max) for ``params``."""
    return d_cover(params), d_max(params)
