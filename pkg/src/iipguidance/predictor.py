"""Closed-form ballistic impact point prediction.

Given an inertial state, computes the impact unit vector, the central
angle to impact (angle of flight), the remaining time of flight, and the
impact latitude/longitude in both ECI and ECEF frames. No iteration is
involved anywhere in the chain.
"""

from dataclasses import dataclass

import numpy as np

from .errors import HyperbolicState, NoImpact, PhiZero, VerticalFlight
from .geo import EarthModel, StateVector, eci_to_ecef_matrix, unit_triad

# Discriminant below this (in absolute, dimensionless c-units) is a
# genuine miss rather than rounding at tangency.
_NO_IMPACT_TOL = 1e-12


@dataclass(frozen=True)
class ImpactPrediction:
    """Impact point solution and its intermediate scalars.

    i_p        : impact unit vector, ECI
    lat_p      : impact latitude, rad (same in ECI and ECEF)
    lon_p      : impact longitude in ECI, rad
    lon_p_ecef : impact longitude in ECEF, rad
    t_f        : time of flight to impact, s
    gamma0     : flight path angle at the current state, rad
    phi        : angle of flight (central angle to impact), rad
    c1, c2, c3 : impact-condition coefficients, dimensionless
    lambda_cap : squared speed ratio v0^2 / v_circular^2
    i_p_ecef   : impact unit vector, ECEF
    delta_t    : Earth-rotation interval t - t_ref + t_f, s
    """

    i_p: np.ndarray
    lat_p: float
    lon_p: float
    lon_p_ecef: float
    t_f: float
    gamma0: float
    phi: float
    c1: float
    c2: float
    c3: float
    lambda_cap: float
    i_p_ecef: np.ndarray
    delta_t: float


def flight_path_angle(state: StateVector) -> float:
    """Angle between velocity and local horizontal, rad; positive ascending."""
    r0 = np.linalg.norm(state.r)
    v0 = np.linalg.norm(state.v)
    s = np.dot(state.r, state.v) / (r0 * v0)
    return float(np.arcsin(np.clip(s, -1.0, 1.0)))


def angle_of_flight(state: StateVector, earth: EarthModel):
    """Central angle swept from the current position to surface impact.

    Returns (phi, c1, c2, c3). The impact condition is
    c1 sin(phi) + c2 cos(phi) = c3; the positive square-root branch gives
    the first downrange intersection, and the cosine is reconstructed
    from the condition itself so that phi > pi/2 resolves correctly.

    Raises NoImpact when the conic never descends to the surface.
    """
    i_r, i_theta, i_h = unit_triad(state.r, state.v)  # raises if degenerate
    r0 = np.linalg.norm(state.r)
    h = np.linalg.norm(np.cross(state.r, state.v))
    rdotv = float(np.dot(state.r, state.v))

    c1 = -h * rdotv / (earth.mu * r0)
    c2 = h * h / (earth.mu * r0) - 1.0
    c3 = h * h / (earth.mu * earth.r_e) - 1.0

    denom = c1 * c1 + c2 * c2  # = e^2 (h^2 / (mu r0))^2
    if denom < 1e-30:
        # Circular orbit: impact only in the grazing case r0 == r_e.
        if abs(c3) < 1e-12:
            return 0.0, c1, c2, c3
        raise NoImpact("circular orbit does not reach the surface radius")

    disc = c1 * c1 * c3 * c3 - denom * (c3 * c3 - c2 * c2)
    if disc < -_NO_IMPACT_TOL:
        raise NoImpact(f"impact-condition discriminant {disc:.3e} < 0")
    disc = max(disc, 0.0)

    sin_phi = np.clip((c1 * c3 + np.sqrt(disc)) / denom, -1.0, 1.0)
    if abs(c2) > 1e-15:
        cos_phi = (c3 - c1 * sin_phi) / c2
        phi = float(np.arctan2(sin_phi, cos_phi))
    else:
        # c2 ~ 0 leaves the cosine sign free; impact must be descending,
        # i.e. c2 sin(phi) - c1 cos(phi) < 0, so cos(phi) takes sign(c1).
        phi = float(np.arcsin(sin_phi))
        if np.sign(np.cos(phi)) != np.sign(c1) and c1 != 0.0:
            phi = float(np.pi - phi)
    return phi, c1, c2, c3


def iip_unit_vector(state: StateVector, gamma0: float, phi: float):
    """Impact direction as a combination of the radial and velocity units.

    Raises VerticalFlight when cos(gamma0) vanishes.
    """
    cg = np.cos(gamma0)
    if abs(cg) < 1e-9:
        raise VerticalFlight("flight path angle at +/-90 deg")
    i_r0 = state.r / np.linalg.norm(state.r)
    i_v0 = state.v / np.linalg.norm(state.v)
    return (np.cos(gamma0 + phi) / cg) * i_r0 + (np.sin(phi) / cg) * i_v0


def time_of_flight(state: StateVector, gamma0: float, phi: float,
                   earth: EarthModel) -> float:
    """Remaining ballistic flight time, s (closed form, elliptic case)."""
    r0 = np.linalg.norm(state.r)
    v0 = np.linalg.norm(state.v)
    lam = r0 * v0 * v0 / earth.mu
    if lam >= 2.0:
        raise HyperbolicState(f"lambda = {lam:.6f} >= 2")
    if phi <= 0.0:
        raise PhiZero(f"phi = {phi:.3e} <= 0")

    cg = np.cos(gamma0)
    sg = np.sin(gamma0)
    k = 2.0 / lam - 1.0
    num = sg / cg * (1.0 - np.cos(phi)) + (1.0 - lam) * np.sin(phi)
    den = (2.0 - lam) * ((1.0 - np.cos(phi)) / (lam * cg * cg)
                         + np.cos(gamma0 + phi) / cg)
    # atan2 keeps the arc-time term continuous past the quarter-arc point
    # where the denominator changes sign.
    arc = np.arctan2(np.sqrt(k), cg / np.tan(phi / 2.0) - sg)
    t_f = (r0 / (v0 * cg)) * (num / den + 2.0 * cg / (lam * k ** 1.5) * arc)
    return float(t_f)


def predict(state: StateVector, earth: EarthModel) -> ImpactPrediction:
    """Full impact prediction for one state, ECI and ECEF."""
    gamma0 = flight_path_angle(state)
    phi, c1, c2, c3 = angle_of_flight(state, earth)
    i_p = iip_unit_vector(state, gamma0, phi)
    t_f = time_of_flight(state, gamma0, phi, earth)

    r0 = np.linalg.norm(state.r)
    v0 = np.linalg.norm(state.v)
    lam = r0 * v0 * v0 / earth.mu

    lat_p = float(np.arcsin(np.clip(i_p[2], -1.0, 1.0)))
    lon_p = float(np.arctan2(i_p[1], i_p[0]))
    delta_t = state.t - earth.t_ref + t_f
    lon_p_ecef = lon_p - earth.omega_e * delta_t
    lon_p_ecef = float(np.arctan2(np.sin(lon_p_ecef), np.cos(lon_p_ecef)))

    cl = np.cos(lat_p)
    i_p_ecef = np.array([cl * np.cos(lon_p_ecef),
                         cl * np.sin(lon_p_ecef),
                         np.sin(lat_p)])

    return ImpactPrediction(
        i_p=i_p, lat_p=lat_p, lon_p=lon_p, lon_p_ecef=lon_p_ecef,
        t_f=t_f, gamma0=gamma0, phi=phi, c1=c1, c2=c2, c3=c3,
        lambda_cap=lam, i_p_ecef=i_p_ecef, delta_t=delta_t,
    )
