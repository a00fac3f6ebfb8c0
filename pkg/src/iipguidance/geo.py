"""Earth model, frame transforms, and the orbital unit-vector triad.

All quantities are SI (m, s, kg, rad). Vectors are length-3 numpy arrays
in ECI axes unless noted otherwise.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateAngularMomentum, NotUnit

# Minimum specific angular momentum (m^2/s) below which the orbital plane
# is treated as undefined. Far below any physical boostback state.
EPS_ANGULAR_MOMENTUM = 1.0


@dataclass(frozen=True)
class EarthModel:
    """Spherical rotating Earth.

    mu      : gravitational parameter, m^3/s^2
    r_e     : Earth (and impact) radius, m
    omega_e : rotation rate, rad/s
    t_ref   : epoch at which ECI and ECEF axes coincide, s
    """

    mu: float = 3.986004418e14
    r_e: float = 6378137.0
    omega_e: float = 7.2921159e-5
    t_ref: float = 0.0

    def __post_init__(self):
        if self.mu <= 0 or self.r_e <= 0 or self.omega_e < 0:
            raise ValueError("EarthModel requires mu > 0, r_e > 0, omega_e >= 0")


@dataclass(frozen=True)
class StateVector:
    """Inertial translational state of the rocket.

    t : time, s; r : ECI position, m; v : ECI velocity, m/s; m : mass, kg
    """

    t: float
    r: np.ndarray
    v: np.ndarray
    m: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "r", np.asarray(self.r, dtype=float))
        object.__setattr__(self, "v", np.asarray(self.v, dtype=float))
        if np.linalg.norm(self.r) <= 0:
            raise ValueError("StateVector requires a nonzero position")
        if self.m <= 0:
            raise ValueError("StateVector requires positive mass")


def unit_triad(r, v):
    """Radial / transverse / angular-momentum unit vectors (i_r, i_theta, i_h).

    i_r along r, i_h along r x v, i_theta = i_h x i_r completes the
    right-handed orthonormal set.

    Raises DegenerateAngularMomentum when ||r x v|| is below threshold.
    """
    r = np.asarray(r, dtype=float)
    v = np.asarray(v, dtype=float)
    h_vec = np.cross(r, v)
    h = np.linalg.norm(h_vec)
    if h < EPS_ANGULAR_MOMENTUM:
        raise DegenerateAngularMomentum(
            f"||r x v|| = {h:.3e} m^2/s; orbital plane undefined"
        )
    i_r = r / np.linalg.norm(r)
    i_h = h_vec / h
    i_theta = np.cross(i_h, i_r)
    return i_r, i_theta, i_h


def gravity(r, earth: EarthModel):
    """Two-body gravitational acceleration -mu r / ||r||^3."""
    r = np.asarray(r, dtype=float)
    rn = np.linalg.norm(r)
    return -earth.mu / rn**3 * r


def eci_to_ecef_matrix(delta_t, earth: EarthModel):
    """Rotation from ECI to ECEF axes after delta_t seconds of Earth spin.

    Positive rotation of the ECEF frame about +z by omega_e * delta_t,
    so ECEF components lag ECI longitudes by that angle.
    """
    ang = earth.omega_e * delta_t
    c, s = np.cos(ang), np.sin(ang)
    return np.array([[c, s, 0.0], [-s, c, 0.0], [0.0, 0.0, 1.0]])


def latlon_from_unit(u):
    """Geocentric latitude / longitude (rad) of a unit direction vector."""
    u = np.asarray(u, dtype=float)
    n = np.linalg.norm(u)
    if abs(n - 1.0) > 1e-9:
        raise NotUnit(f"||u|| = {n:.12f}, expected 1")
    lat = np.arcsin(np.clip(u[2], -1.0, 1.0))
    lon = np.arctan2(u[1], u[0])
    return float(lat), float(lon)


def unit_from_latlon(lat, lon):
    """Unit direction vector from geocentric latitude / longitude (rad)."""
    cl = np.cos(lat)
    return np.array([cl * np.cos(lon), cl * np.sin(lon), np.sin(lat)])


def great_circle_distance(u1, u2, earth: EarthModel):
    """Arc length (m) along the surface between two unit directions."""
    u1 = np.asarray(u1, dtype=float)
    u2 = np.asarray(u2, dtype=float)
    cross = np.linalg.norm(np.cross(u1, u2))
    dot = float(np.dot(u1, u2))
    return earth.r_e * float(np.arctan2(cross, dot))


def rotate_about_axis(u, axis, angle):
    """Rodrigues rotation of u about a unit axis by angle (rad)."""
    u = np.asarray(u, dtype=float)
    axis = np.asarray(axis, dtype=float)
    c, s = np.cos(angle), np.sin(angle)
    return u * c + np.cross(axis, u) * s + axis * np.dot(axis, u) * (1.0 - c)
