"""Closed-loop impact-point guidance for a boostback burn.

Runs the full feedback loop for the five study targets (impact point
moved ±100 / ±200 km downrange and 150 km crossrange) and prints a
summary table: burn duration, propellant, delta-V, and final miss. Each
run steers the stage with the closed-form constrained-direction law and
cuts the engine inside the 500 m convergence radius.
"""

import numpy as np

from iipguidance import (
    EarthModel,
    Scenario,
    StateVector,
    VehicleModel,
    run_closed_loop,
    target_from_offsets,
)

earth = EarthModel(t_ref=-240.0)
vehicle = VehicleModel(dry_mass=22.2e3, propellant_mass=57.0e3,
                       thrust=279.6e3 * 9.80665, isp=311.0)
initial = StateVector(t=0.0,
                      r=np.array([1164.0e3, -5507.0e3, 3258.0e3]),
                      v=np.array([1337.0, 743.0, 1029.0]),
                      m=vehicle.initial_mass)

offsets = [(-100.0, 0.0), (-200.0, 0.0), (100.0, 0.0), (200.0, 0.0),
           (0.0, 150.0)]

print(f"{'downrange':>10} {'crossrange':>10} {'burn':>8} "
      f"{'propellant':>11} {'delta-V':>9} {'miss':>7}  outcome")
print(f"{'km':>10} {'km':>10} {'s':>8} {'t':>11} {'m/s':>9} {'m':>7}")
for downrange, crossrange in offsets:
    target = target_from_offsets(initial, downrange, crossrange, earth)
    result = run_closed_loop(Scenario(
        earth=earth, vehicle=vehicle, initial=initial, target=target,
        dt=0.05, max_time=300.0, convergence_radius=500.0))
    print(f"{downrange:10.0f} {crossrange:10.0f} {result.final_time:8.2f} "
          f"{result.propellant_used / 1e3:11.2f} {result.delta_v:9.1f} "
          f"{result.miss_distance:7.0f}  {result.outcome}")

print("\nNote: retro burns (negative downrange) cost far more propellant "
      "than prograde ones\nbecause the transverse rate-basis vector is "
      "less effective against the orbital motion.")
