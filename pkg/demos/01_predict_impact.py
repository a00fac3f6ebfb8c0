"""Predict the ballistic impact point of a separated first stage.

Walks through the basic prediction pipeline: given an inertial position
and velocity, compute the impact-point direction, its latitude/longitude
in both inertial and Earth-fixed frames, and the remaining time of
flight. Finishes by cross-checking the closed-form answer against a
high-accuracy numerical free-fall propagation.
"""

import numpy as np

from iipguidance import EarthModel, StateVector, predict
from iipguidance.geo import great_circle_distance
from iipguidance.oracles import free_fall_impact

earth = EarthModel(t_ref=-240.0)

# Stage at 125.5 km altitude, 1.84 km/s, shallow ascending path.
state = StateVector(t=0.0,
                    r=np.array([1164.0e3, -5507.0e3, 3258.0e3]),
                    v=np.array([1337.0, 743.0, 1029.0]))

pred = predict(state, earth)
print("flight path angle : %7.3f deg" % np.degrees(pred.gamma0))
print("angle of flight   : %7.3f deg" % np.degrees(pred.phi))
print("time of flight    : %7.2f s" % pred.t_f)
print("impact latitude   : %7.3f deg" % np.degrees(pred.lat_p))
print("impact longitude  : %7.3f deg (ECEF)" % np.degrees(pred.lon_p_ecef))

# Independent check: integrate the free fall numerically and compare.
i_p_num, t_f_num = free_fall_impact(state, earth)
print("\ncross-check vs numerical free fall")
print("  impact point error: %.3f m"
      % great_circle_distance(pred.i_p, i_p_num, earth))
print("  flight time error : %.2e s" % abs(pred.t_f - t_f_num))
