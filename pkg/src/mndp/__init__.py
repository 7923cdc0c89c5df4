"""Charging-PAD placement for UAV-recharged sensor networks."""
from .baseline_dc import dc_solve
from .cdc import cdc_solve
from .dsc import ShiftConfig, dsc_optimize
from .energy import UavParams, d_cover, d_max
from .geometry import Circle, Point
from .scenario import Scenario, gen_gaussian_mixture, gen_uniform
from .verify import Deployment, verify_deployment

__all__ = [
    "Circle", "Deployment", "Point", "Scenario", "ShiftConfig", "UavParams",
    "cdc_solve", "d_cover", "d_max", "dc_solve", "dsc_optimize",
    "gen_gaussian_mixture", "gen_uniform", "verify_deployment",
]
