"""Closed-form feedback law steering the impact point to a target.

Each call builds the great-circle direction from the current impact
point to the target, projects the acceleration drift basis onto it, and
solves the resulting constrained maximization (fixed acceleration
magnitude, zero cross-arc drift) analytically with two Lagrange
multipliers. No iteration anywhere.
"""

from dataclasses import dataclass

import numpy as np

from .errors import (
    Antipodal,
    Converged,
    DegenerateObjective,
    GuidanceHold,
    NearCircular,
    SingularAnomaly,
    SingularDenominator,
    ZeroConstraint,
)
from .geo import EarthModel, StateVector, great_circle_distance, unit_triad
from .predictor import predict
from .rates import compute_rate_basis

# Great-circle distance (m) below which the target counts as reached.
CONVERGENCE_RADIUS = 500.0


@dataclass(frozen=True)
class TargetIip:
    """Target impact direction, unit vector in ECEF axes."""

    u: np.ndarray

    def __post_init__(self):
        u = np.asarray(self.u, dtype=float)
        n = np.linalg.norm(u)
        if abs(n - 1.0) > 1e-9:
            raise ValueError(f"target direction norm {n:.12f} != 1")
        object.__setattr__(self, "u", u / n)


@dataclass(frozen=True)
class GuidanceCommand:
    """One guidance solution.

    a_r, a_theta, a_h : acceleration components in the orbital triad, m/s^2
    a_eci             : the same acceleration resolved in ECI axes
    lambda1, lambda2  : multipliers of the magnitude / cross-arc constraints
    iip_speed         : achieved impact-point drift rate along the arc, rad/s
    converged         : target reached; components are zero
    """

    a_r: float
    a_theta: float
    a_h: float
    a_eci: np.ndarray
    lambda1: float
    lambda2: float
    iip_speed: float
    converged: bool

    @classmethod
    def zero(cls, converged=True):
        return cls(a_r=0.0, a_theta=0.0, a_h=0.0, a_eci=np.zeros(3),
                   lambda1=0.0, lambda2=0.0, iip_speed=0.0,
                   converged=converged)


def arc_direction(i_p_e, target: TargetIip, earth: EarthModel = None,
                  convergence_radius: float = CONVERGENCE_RADIUS):
    """Unit normal and tangent of the shortest arc from the current
    impact point to the target (both ECEF).

    Returns (i_q_e, i_u_e): i_q_e is normal to the arc plane, i_u_e the
    departure direction along the arc.

    Raises Converged when the impact point is already at the target and
    Antipodal when the two are diametrically opposed.
    """
    i_p_e = np.asarray(i_p_e, dtype=float)
    if earth is None:
        earth = EarthModel()
    if float(np.dot(i_p_e, target.u)) < -1.0 + 1e-9:
        raise Antipodal("target is antipodal to the current impact point")
    if great_circle_distance(i_p_e, target.u, earth) < convergence_radius:
        raise Converged("impact point within convergence radius of target")
    q = np.cross(i_p_e, target.u - i_p_e)
    qn = np.linalg.norm(q)
    if qn < 1e-15:
        raise Converged("arc normal vanishes; impact point at target")
    i_q_e = q / qn
    i_u_e = np.cross(i_q_e, i_p_e)
    return i_q_e, i_u_e


def solve_pcg(c, f, a_m):
    """Maximize c.x subject to ||x|| = a_m and f.x = 0, in closed form.

    Returns (x, lambda1, lambda2). The stationarity conditions give
    x = -(c + lambda2 f) / (2 lambda1) with lambda2 = -c.f / f.f; the
    magnitude constraint fixes |lambda1| and the maximizing sign makes x
    point along the projection of c onto the plane orthogonal to f.

    Raises ZeroConstraint when f vanishes (falls back to the caller
    maximizing along c) and DegenerateObjective when c is parallel to f.
    """
    c = np.asarray(c, dtype=float)
    f = np.asarray(f, dtype=float)
    ff = float(np.dot(f, f))
    if ff < 1e-30:
        raise ZeroConstraint("constraint vector is zero")
    lambda2 = -float(np.dot(c, f)) / ff
    w = c + lambda2 * f  # projection of c onto the feasible plane
    wn = float(np.linalg.norm(w))
    if wn < 1e-15:
        raise DegenerateObjective("objective gradient parallel to constraint")
    # -c.(lambda2 f + c) = -||w||^2 <= 0, so the maximizing branch has
    # lambda1 < 0 and x = a_m * w / ||w||.
    lambda1 = -wn / (2.0 * a_m)
    x = (-lambda2 * f - c) / (2.0 * lambda1)
    return x, lambda1, lambda2


def guidance_step(state: StateVector, target: TargetIip, a_m: float,
                  earth: EarthModel,
                  convergence_radius: float = CONVERGENCE_RADIUS
                  ) -> GuidanceCommand:
    """One pass of the feedback pipeline: predict, rate basis, arc
    direction, closed-form solve, ECI resolution.

    Raises GuidanceHold for recoverable geometric singularities so the
    caller can reuse its previous command for one step; other prediction
    errors propagate.
    """
    pred = predict(state, earth)
    try:
        basis = compute_rate_basis(state, pred, earth)
    except (NearCircular, SingularAnomaly, SingularDenominator) as exc:
        raise GuidanceHold(str(exc)) from exc

    try:
        i_q_e, i_u_e = arc_direction(pred.i_p_ecef, target, earth,
                                     convergence_radius)
    except Converged:
        return GuidanceCommand.zero()

    d_e = (basis.d_r_e, basis.d_theta_e, basis.d_h_e)
    c = np.array([float(np.dot(i_u_e, d)) for d in d_e])
    f = np.array([float(np.dot(i_q_e, d)) for d in d_e])
    try:
        x, lambda1, lambda2 = solve_pcg(c, f, a_m)
    except ZeroConstraint:
        x = a_m * c / np.linalg.norm(c)
        lambda1, lambda2 = -np.linalg.norm(c) / (2.0 * a_m), 0.0

    i_r, i_theta, i_h = unit_triad(state.r, state.v)
    a_eci = x[0] * i_r + x[1] * i_theta + x[2] * i_h
    return GuidanceCommand(
        a_r=float(x[0]), a_theta=float(x[1]), a_h=float(x[2]),
        a_eci=a_eci, lambda1=float(lambda1), lambda2=float(lambda2),
        iip_speed=float(np.dot(c, x)), converged=False,
    )
