"""Independent numerical oracles for the analytic formulas.

Everything here deliberately avoids the closed-form prediction path:
impact points come from adaptive numerical integration of the two-body
equations, derivatives from finite differences of those integrations,
and the guidance optimum from brute-force search on the sphere. The
integrator (DOP853) also differs from the simulator's fixed-step RK4 so
a shared bug cannot produce a false pass.
"""

from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .errors import NoImpact
from .geo import EarthModel, StateVector, eci_to_ecef_matrix, unit_triad

_REL_ERR_FLOOR = 1e-12


@dataclass(frozen=True)
class OracleReport:
    """One oracle-vs-analytic comparison."""

    quantity: str
    analytic: float
    oracle: float
    rel_error: float
    tolerance: float
    passed: bool


def make_report(quantity, analytic, oracle, tolerance):
    analytic = np.atleast_1d(np.asarray(analytic, dtype=float))
    oracle = np.atleast_1d(np.asarray(oracle, dtype=float))
    err = np.linalg.norm(analytic - oracle) / max(np.linalg.norm(oracle),
                                                  _REL_ERR_FLOOR)
    return OracleReport(
        quantity=quantity,
        analytic=float(np.linalg.norm(analytic)),
        oracle=float(np.linalg.norm(oracle)),
        rel_error=float(err),
        tolerance=tolerance,
        passed=bool(err <= tolerance),
    )


def free_fall_impact(state: StateVector, earth: EarthModel):
    """Numerically propagated unpowered impact: (unit direction, time).

    Integrates two-body motion until the radius crosses the surface,
    then refines the crossing to better than 1 mm in radius.

    Raises NoImpact when the trajectory never descends to the surface.
    """
    mu, re = earth.mu, earth.r_e

    def rhs(t, y):
        r = y[:3]
        rn = np.linalg.norm(r)
        return np.concatenate([y[3:], -mu / rn**3 * r])

    def crossing(t, y):
        return np.linalg.norm(y[:3]) - re

    crossing.terminal = True
    crossing.direction = -1

    # Generous horizon: an elliptic period upper bound, else a day.
    energy = 0.5 * np.dot(state.v, state.v) - mu / np.linalg.norm(state.r)
    if energy < 0:
        a = -mu / (2.0 * energy)
        horizon = 2.1 * 2.0 * np.pi * np.sqrt(a**3 / mu)
    else:
        horizon = 86400.0

    sol = solve_ivp(rhs, (0.0, horizon), np.concatenate([state.r, state.v]),
                    method="DOP853", rtol=1e-13, atol=1e-9,
                    events=crossing, dense_output=True)
    if len(sol.t_events[0]) == 0:
        raise NoImpact("numerical propagation never reached the surface")
    t_hit = sol.t_events[0][0]

    def radius_err(t):
        return np.linalg.norm(sol.sol(t)[:3]) - re

    # The event locator is already tight; bracket and polish to < 1 mm.
    lo = max(0.0, t_hit - 1e-4)
    hi = min(sol.t[-1], t_hit + 1e-4)
    if radius_err(lo) > 0 > radius_err(hi):
        t_hit = brentq(radius_err, lo, hi, xtol=1e-12)
    r_hit = sol.sol(t_hit)[:3]
    return r_hit / np.linalg.norm(r_hit), float(t_hit)


def free_fall_impact_ecef(state: StateVector, earth: EarthModel):
    """Oracle impact direction rotated into ECEF at the impact epoch."""
    i_p, t_f = free_fall_impact(state, earth)
    T = eci_to_ecef_matrix(state.t - earth.t_ref + t_f, earth)
    return T @ i_p, t_f


def fd_iip_rate(state: StateVector, axis: str, earth: EarthModel,
                delta_t: float = 1e-3, frame: str = "eci"):
    """Finite-difference impact-point drift per unit acceleration.

    Applies impulses of +/- 0.5 m/s^2 * delta_t along the chosen triad
    axis ('r', 'theta', or 'h') and centrally differences the
    numerically propagated impact directions.
    """
    i_r, i_theta, i_h = unit_triad(state.r, state.v)
    direction = {"r": i_r, "theta": i_theta, "h": i_h}[axis]
    lo = StateVector(t=state.t, r=state.r,
                     v=state.v - direction * 0.5 * delta_t, m=state.m)
    hi = StateVector(t=state.t, r=state.r,
                     v=state.v + direction * 0.5 * delta_t, m=state.m)
    if frame == "eci":
        ip0, _ = free_fall_impact(lo, earth)
        ip1, _ = free_fall_impact(hi, earth)
    else:
        ip0, _ = free_fall_impact_ecef(lo, earth)
        ip1, _ = free_fall_impact_ecef(hi, earth)
    return (ip1 - ip0) / delta_t


def fd_tof_rate(state: StateVector, axis: str, earth: EarthModel,
                delta_t: float = 1e-3):
    """Finite-difference time-of-flight sensitivity for one triad axis.

    The impulse is applied at a frozen clock, so the free-fall -1 term
    cancels and only the acceleration-driven part remains.
    """
    i_r, i_theta, i_h = unit_triad(state.r, state.v)
    direction = {"r": i_r, "theta": i_theta, "h": i_h}[axis]
    lo = StateVector(t=state.t, r=state.r,
                     v=state.v - direction * 0.5 * delta_t, m=state.m)
    hi = StateVector(t=state.t, r=state.r,
                     v=state.v + direction * 0.5 * delta_t, m=state.m)
    _, tf0 = free_fall_impact(lo, earth)
    _, tf1 = free_fall_impact(hi, earth)
    return (tf1 - tf0) / delta_t


def sphere_search_pcg(c, f, a_m, resolution_deg=0.25):
    """Brute-force solution of the guidance maximization.

    Enumerates a Fibonacci sphere at the given angular resolution, keeps
    directions within the constraint band |f.x| < a_m ||f|| sin(res),
    snaps each survivor exactly onto the constraint plane (so slightly
    infeasible grid points cannot overshoot the true constrained
    optimum), and returns (best direction scaled to a_m, best
    objective).
    """
    c = np.asarray(c, dtype=float)
    f = np.asarray(f, dtype=float)
    n_pts = max(int(np.ceil(4.0 / np.radians(resolution_deg)**2)), 100)
    k = np.arange(n_pts)
    golden = np.pi * (3.0 - np.sqrt(5.0))
    z = 1.0 - 2.0 * (k + 0.5) / n_pts
    rho = np.sqrt(1.0 - z * z)
    theta = golden * k
    pts = np.column_stack([rho * np.cos(theta), rho * np.sin(theta), z])

    fn = np.linalg.norm(f)
    f_hat = f / fn
    band = a_m * fn * np.sin(np.radians(resolution_deg))
    keep = np.abs(a_m * pts @ f) < max(band, 1e-300)
    if not keep.any():
        keep = np.abs(a_m * pts @ f) <= np.min(np.abs(a_m * pts @ f))
    cand = pts[keep]
    cand = cand - np.outer(cand @ f_hat, f_hat)
    norms = np.linalg.norm(cand, axis=1)
    ok = norms > 1e-12
    cand = cand[ok] / norms[ok, None]
    obj = a_m * cand @ c
    best = int(np.argmax(obj))
    return a_m * cand[best], float(obj[best])


def rocket_equation_check(result, vehicle, tolerance=0.02):
    """Cross-check recorded delta-v against the rocket equation."""
    m0 = vehicle.initial_mass
    dv_pred = vehicle.isp * vehicle.g0 * np.log(
        m0 / (m0 - result.propellant_used))
    return make_report("delta_v_rocket_equation", result.delta_v, dv_pred,
                       tolerance)


def random_suborbital_state(rng, earth: EarthModel) -> StateVector:
    """Boostback-envelope random state: altitude 50-300 km, speed
    0.5-3 km/s, flight path angle -30..45 deg, arbitrary plane."""
    alt = rng.uniform(50e3, 300e3)
    speed = rng.uniform(500.0, 3000.0)
    gamma = np.radians(rng.uniform(-30.0, 45.0))
    while True:
        up = rng.normal(size=3)
        up /= np.linalg.norm(up)
        horiz = rng.normal(size=3)
        horiz -= up * np.dot(horiz, up)
        hn = np.linalg.norm(horiz)
        if hn > 1e-6:
            horiz /= hn
            break
    r = (earth.r_e + alt) * up
    v = speed * (np.cos(gamma) * horiz + np.sin(gamma) * up)
    return StateVector(t=0.0, r=r, v=v)


def run_oracle_suite(seed, n_samples, earth: EarthModel = None):
    """Adjudicate every analytic formula on random suborbital states.

    For each state: predicted impact direction and time of flight
    against the numerical free-fall oracle, all six drift-basis vectors
    and both time-of-flight sensitivities against central differences of
    the oracle, the free-fall time-of-flight rate identity (-1), and the
    closed-form guidance solution against the sphere search.

    Returns a flat list of OracleReport.
    """
    from .guidance import solve_pcg
    from .predictor import predict
    from .rates import compute_rate_basis

    if earth is None:
        earth = EarthModel()
    rng = np.random.default_rng(seed)
    reports = []
    chord_tol = 1e3 / earth.r_e  # 1 km on the surface

    n_done = 0
    while n_done < n_samples:
        state = random_suborbital_state(rng, earth)
        try:
            pred = predict(state, earth)
            basis = compute_rate_basis(state, pred, earth)
        except Exception:
            continue  # outside the guard rails; draw another state
        n_done += 1
        tag = f"s{n_done:04d}"

        ip_o, tf_o = free_fall_impact(state, earth)
        reports.append(make_report(f"{tag}/iip_direction", pred.i_p, ip_o,
                                   chord_tol))
        reports.append(make_report(f"{tag}/time_of_flight", pred.t_f, tf_o,
                                   0.5 / max(tf_o, 1.0)))

        # Central differences of the oracle, both frames, all three axes.
        i_r, i_theta, i_h = unit_triad(state.r, state.v)
        axes = {"r": i_r, "theta": i_theta, "h": i_h}
        analytic_eci = {"r": basis.d_r, "theta": basis.d_theta,
                        "h": basis.d_h}
        analytic_ecef = {"r": basis.d_r_e, "theta": basis.d_theta_e,
                         "h": basis.d_h_e}
        analytic_tf = {"r": basis.dtf_dar, "theta": basis.dtf_datheta}
        dt = 1e-3
        for name, direction in axes.items():
            lo = StateVector(t=state.t, r=state.r,
                             v=state.v - 0.5 * dt * direction)
            hi = StateVector(t=state.t, r=state.r,
                             v=state.v + 0.5 * dt * direction)
            ip_lo, tf_lo = free_fall_impact(lo, earth)
            ip_hi, tf_hi = free_fall_impact(hi, earth)
            reports.append(make_report(f"{tag}/d_{name}_eci",
                                       analytic_eci[name],
                                       (ip_hi - ip_lo) / dt, 1e-3))
            T_lo = eci_to_ecef_matrix(state.t - earth.t_ref + tf_lo, earth)
            T_hi = eci_to_ecef_matrix(state.t - earth.t_ref + tf_hi, earth)
            reports.append(make_report(f"{tag}/d_{name}_ecef",
                                       analytic_ecef[name],
                                       (T_hi @ ip_hi - T_lo @ ip_lo) / dt,
                                       2e-3))
            if name in analytic_tf:
                reports.append(make_report(f"{tag}/dtf_{name}",
                                           analytic_tf[name],
                                           (tf_hi - tf_lo) / dt, 1e-3))

        # Free-fall clock identity: coasting for dt shortens t_f by dt.
        coasted = _coast(state, dt, earth)
        reports.append(make_report(f"{tag}/tf_rate_coast",
                                   (predict(coasted, earth).t_f - pred.t_f)
                                   / dt, -1.0, 1e-3))

        # Closed-form guidance solution vs sphere search on this state's
        # actual drift basis, toward a random nearby target.
        arc = rng.uniform(0.01, 0.5)
        azim = rng.uniform(0.0, 2.0 * np.pi)
        perp = np.cross(pred.i_p_ecef, [0.0, 0.0, 1.0])
        perp /= np.linalg.norm(perp)
        perp2 = np.cross(pred.i_p_ecef, perp)
        axis = np.cos(azim) * perp + np.sin(azim) * perp2
        tgt = np.cos(arc) * pred.i_p_ecef + np.sin(arc) * np.cross(
            axis, pred.i_p_ecef)
        tgt /= np.linalg.norm(tgt)
        q = np.cross(pred.i_p_ecef, tgt - pred.i_p_ecef)
        i_q = q / np.linalg.norm(q)
        i_u = np.cross(i_q, pred.i_p_ecef)
        d_e = (basis.d_r_e, basis.d_theta_e, basis.d_h_e)
        c = np.array([np.dot(i_u, d) for d in d_e])
        f = np.array([np.dot(i_q, d) for d in d_e])
        a_m = rng.uniform(5.0, 50.0)
        x, _, _ = solve_pcg(c, f, a_m)
        _, obj_o = sphere_search_pcg(c, f, a_m)
        reports.append(make_report(f"{tag}/pcg_objective",
                                   float(np.dot(c, x)), obj_o, 1e-4))
    return reports


def _coast(state: StateVector, dt, earth: EarthModel) -> StateVector:
    """Advance a state ballistically by dt with the oracle integrator."""
    mu = earth.mu

    def rhs(t, y):
        r = y[:3]
        rn = np.linalg.norm(r)
        return np.concatenate([y[3:], -mu / rn**3 * r])

    sol = solve_ivp(rhs, (0.0, dt), np.concatenate([state.r, state.v]),
                    method="DOP853", rtol=1e-13, atol=1e-9)
    y = sol.y[:, -1]
    return StateVector(t=state.t + dt, r=y[:3], v=y[3:], m=state.m)
