"""Closed-loop 3-DOF point-mass simulation with mass depletion.

The loop recomputes the feedback guidance command every integration
step (zero-order hold within the step), integrates with classical RK4,
and terminates on convergence, propellant exhaustion, the time limit,
or an unrecoverable guidance failure.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import GuidanceHold, IipError
from .geo import (
    EarthModel,
    StateVector,
    eci_to_ecef_matrix,
    great_circle_distance,
    latlon_from_unit,
    rotate_about_axis,
)
from .guidance import GuidanceCommand, TargetIip, guidance_step
from .predictor import predict

G0 = 9.80665

OUTCOME_CONVERGED = "Converged"
OUTCOME_PROPELLANT = "PropellantExhausted"
OUTCOME_TIME_LIMIT = "TimeLimit"
OUTCOME_FAILURE = "GuidanceFailure"


@dataclass(frozen=True)
class VehicleModel:
    """Constant-thrust vehicle with linear mass depletion.

    dry_mass, propellant_mass in kg; thrust in N; isp in s.
    """

    dry_mass: float
    propellant_mass: float
    thrust: float
    isp: float
    g0: float = G0

    def __post_init__(self):
        if min(self.dry_mass, self.propellant_mass, self.thrust,
               self.isp, self.g0) <= 0:
            raise ValueError("VehicleModel fields must all be positive")

    @property
    def mass_flow(self):
        return self.thrust / (self.isp * self.g0)

    @property
    def initial_mass(self):
        return self.dry_mass + self.propellant_mass


@dataclass(frozen=True)
class Scenario:
    """One closed-loop run definition."""

    earth: EarthModel
    vehicle: VehicleModel
    initial: StateVector
    target: TargetIip
    dt: float = 0.05
    max_time: float = 300.0
    convergence_radius: float = 500.0

    def __post_init__(self):
        if self.dt <= 0 or self.max_time <= 0:
            raise ValueError("Scenario requires dt > 0 and max_time > 0")


@dataclass(frozen=True)
class HistoryRecord:
    """One step of the closed-loop history."""

    t: float
    r: np.ndarray
    v: np.ndarray
    m: float
    iip_lat_ecef: float
    iip_lon_ecef: float
    a_r: float
    a_theta: float
    a_h: float
    dist_to_target: float


@dataclass(frozen=True)
class SimResult:
    """Time histories and summary metrics of one run."""

    history: list
    final_time: float
    final_state: StateVector
    propellant_used: float
    delta_v: float
    miss_distance: float
    outcome: str


def dynamics(state: StateVector, a_eci, vehicle: VehicleModel,
             earth: EarthModel):
    """State derivative (r_dot, v_dot, m_dot) under thrust acceleration."""
    rn = np.linalg.norm(state.r)
    g = -earth.mu / rn**3 * state.r
    return state.v, g + np.asarray(a_eci, dtype=float), -vehicle.mass_flow


def _rk4(r, v, a_eci, dt, earth: EarthModel):
    """Classical RK4 over (r, v) with a fixed thrust acceleration."""
    mu = earth.mu

    def acc(rr):
        return -mu / np.linalg.norm(rr)**3 * rr + a_eci

    k1r, k1v = v, acc(r)
    k2r, k2v = v + 0.5 * dt * k1v, acc(r + 0.5 * dt * k1r)
    k3r, k3v = v + 0.5 * dt * k2v, acc(r + 0.5 * dt * k2r)
    k4r, k4v = v + dt * k3v, acc(r + dt * k3r)
    r2 = r + dt / 6.0 * (k1r + 2.0 * k2r + 2.0 * k3r + k4r)
    v2 = v + dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
    return r2, v2


def step(state: StateVector, command: GuidanceCommand,
         vehicle: VehicleModel, earth: EarthModel, dt: float) -> StateVector:
    """Advance one step with the command held constant.

    If propellant runs out mid-step the burn is clipped to burnout and
    the remainder of the step coasts unpowered.
    """
    a_eci = np.zeros(3) if command.converged else command.a_eci
    propellant = state.m - vehicle.dry_mass
    thrusting = propellant > 0 and np.linalg.norm(a_eci) > 0
    if not thrusting:
        r, v = _rk4(state.r, state.v, np.zeros(3), dt, earth)
        return StateVector(t=state.t + dt, r=r, v=v, m=state.m)

    burn_time = min(dt, propellant / vehicle.mass_flow)
    r, v = _rk4(state.r, state.v, a_eci, burn_time, earth)
    m = state.m - vehicle.mass_flow * burn_time
    if burn_time < dt:
        r, v = _rk4(r, v, np.zeros(3), dt - burn_time, earth)
    return StateVector(t=state.t + dt, r=r, v=v, m=m)


def run_closed_loop(scenario: Scenario) -> SimResult:
    """Run the feedback loop until convergence or a terminal condition."""
    earth = scenario.earth
    vehicle = scenario.vehicle
    target = scenario.target
    state = StateVector(t=scenario.initial.t, r=scenario.initial.r,
                        v=scenario.initial.v, m=vehicle.initial_mass)
    m0 = state.m

    history = []
    outcome = OUTCOME_TIME_LIMIT
    prev_command = None
    dist = np.inf

    while True:
        try:
            pred = predict(state, earth)
        except IipError:
            outcome = OUTCOME_FAILURE
            break
        dist = great_circle_distance(pred.i_p_ecef, target.u, earth)

        if dist < scenario.convergence_radius:
            command = GuidanceCommand.zero()
            outcome = OUTCOME_CONVERGED
        elif state.m - vehicle.dry_mass <= 0:
            command = GuidanceCommand.zero(converged=False)
            outcome = OUTCOME_PROPELLANT
        else:
            try:
                command = guidance_step(state, target,
                                        vehicle.thrust / state.m, earth,
                                        scenario.convergence_radius)
            except GuidanceHold:
                if prev_command is None:
                    outcome = OUTCOME_FAILURE
                    break
                command = prev_command
            except IipError:
                outcome = OUTCOME_FAILURE
                break

        lat, lon = latlon_from_unit(pred.i_p_ecef)
        history.append(HistoryRecord(
            t=state.t, r=state.r, v=state.v, m=state.m,
            iip_lat_ecef=lat, iip_lon_ecef=lon,
            a_r=command.a_r, a_theta=command.a_theta, a_h=command.a_h,
            dist_to_target=dist,
        ))

        if outcome in (OUTCOME_CONVERGED, OUTCOME_PROPELLANT):
            break
        if state.t - scenario.initial.t >= scenario.max_time:
            outcome = OUTCOME_TIME_LIMIT
            break

        prev_command = command
        state = step(state, command, vehicle, earth, scenario.dt)

    final_time = state.t - scenario.initial.t
    propellant_used = m0 - state.m
    delta_v = vehicle.isp * vehicle.g0 * np.log(m0 / state.m)
    return SimResult(
        history=history,
        final_time=final_time,
        final_state=state,
        propellant_used=propellant_used,
        delta_v=float(delta_v),
        miss_distance=float(dist),
        outcome=outcome,
    )


def target_from_offsets(state: StateVector, downrange_km: float,
                        crossrange_km: float, earth: EarthModel) -> TargetIip:
    """Target impact direction built from the unpowered impact point.

    Positive downrange moves the point further along the great circle
    from the sub-vehicle ECEF point through the impact point; positive
    crossrange moves it to the right of that direction.
    """
    pred = predict(state, earth)
    sub = eci_to_ecef_matrix(state.t - earth.t_ref, earth) \
        @ (state.r / np.linalg.norm(state.r))
    n = np.cross(sub, pred.i_p_ecef)
    n /= np.linalg.norm(n)
    u = rotate_about_axis(pred.i_p_ecef, n, downrange_km * 1e3 / earth.r_e)
    if crossrange_km != 0.0:
        tangent = np.cross(n, u)
        tangent /= np.linalg.norm(tangent)
        u = rotate_about_axis(u, tangent, crossrange_km * 1e3 / earth.r_e)
    return TargetIip(u=u / np.linalg.norm(u))
