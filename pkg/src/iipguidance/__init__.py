"""Ballistic impact point prediction, analytic sensitivities, and
closed-form feedback guidance for boostback-class maneuvers."""

from .geo import (
    EarthModel,
    StateVector,
    eci_to_ecef_matrix,
    gravity,
    great_circle_distance,
    latlon_from_unit,
    rotate_about_axis,
    unit_from_latlon,
    unit_triad,
)
from .guidance import GuidanceCommand, TargetIip, arc_direction, \
    guidance_step, solve_pcg
from .predictor import ImpactPrediction, predict
from .rates import IipRateBasis, OrbitElements, compute_rate_basis
from .sim import (
    Scenario,
    SimResult,
    VehicleModel,
    run_closed_loop,
    target_from_offsets,
)

__version__ = "0.1.0"

__all__ = [
    "EarthModel", "StateVector", "ImpactPrediction", "IipRateBasis",
    "OrbitElements", "GuidanceCommand", "TargetIip", "Scenario",
    "SimResult", "VehicleModel", "eci_to_ecef_matrix", "gravity",
    "great_circle_distance", "latlon_from_unit", "rotate_about_axis",
    "unit_from_latlon", "unit_triad", "predict", "compute_rate_basis",
    "arc_direction", "solve_pcg", "guidance_step", "run_closed_loop",
    "target_from_offsets",
]
