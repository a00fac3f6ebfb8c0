"""Analytic sensitivities of the impact point to thrust acceleration.

For each acceleration component (radial a_r, transverse a_theta,
out-of-plane a_h) these give the direction and magnitude of the induced
impact-point drift, in ECI and in the rotating ECEF frame, plus the
matching time-of-flight sensitivities. Everything is closed form; the
companion oracles module checks every expression by finite differences.
"""

from dataclasses import dataclass

import numpy as np

from .errors import (
    AnomalyDomain,
    NearCircular,
    NonElliptic,
    SingularAnomaly,
    SingularDenominator,
)
from .geo import EarthModel, StateVector, eci_to_ecef_matrix, unit_triad
from .predictor import ImpactPrediction

EPS_ECCENTRICITY = 1e-6
EPS_SIN_ANOMALY = 1e-9


@dataclass(frozen=True)
class OrbitElements:
    """Elliptic elements of the current ballistic conic.

    E0 and Ep are the eccentric anomalies at the current and impact
    points, measured continuously along the direction of motion (Ep lies
    on the descending branch, E0 on whichever branch the state occupies).
    """

    a: float
    e: float
    p: float
    n: float
    E0: float
    Ep: float


@dataclass(frozen=True)
class IipRateBasis:
    """Impact-point drift per unit acceleration along each triad axis.

    d_r, d_theta, d_h       : ECI drift directions, 1/(m/s^2)/s scale
    d_r_e, d_theta_e, d_h_e : same in ECEF axes with Earth-rotation coupling
    dphi_dar, dphi_datheta  : angle-of-flight rate sensitivities
    dtf_dar, dtf_datheta    : time-of-flight sensitivities, s/(m/s^2)
    """

    d_r: np.ndarray
    d_theta: np.ndarray
    d_h: np.ndarray
    d_r_e: np.ndarray
    d_theta_e: np.ndarray
    d_h_e: np.ndarray
    dphi_dar: float
    dphi_datheta: float
    dtf_dar: float
    dtf_datheta: float


def phi_sensitivities(state: StateVector, pred: ImpactPrediction,
                      earth: EarthModel):
    """Sensitivity of the angle-of-flight rate to a_r and a_theta.

    Raises SingularDenominator for grazing geometry where the shared
    denominator -c2 sin(phi) + c1 cos(phi) vanishes.
    """
    r0 = np.linalg.norm(state.r)
    h = np.linalg.norm(np.cross(state.r, state.v))
    rdotv = float(np.dot(state.r, state.v))
    sphi, cphi = np.sin(pred.phi), np.cos(pred.phi)

    den = -pred.c2 * sphi + pred.c1 * cphi
    if abs(den) < 1e-12:
        raise SingularDenominator(f"phi-rate denominator {den:.3e}")
    den *= earth.mu
    dphi_dar = h * sphi / den
    dphi_datheta = (2.0 * h * (r0 / earth.r_e - cphi) + rdotv * sphi) / den
    return float(dphi_dar), float(dphi_datheta)


def rate_basis_eci(state: StateVector, pred: ImpactPrediction,
                   earth: EarthModel):
    """ECI impact-point drift directions (d_r, d_theta, d_h).

    d_r and d_theta share one in-plane vector scaled by their respective
    phi-rate sensitivities (hence parallel); d_h is along the orbit
    normal scaled by r0 sin(phi) / h. All three are tangent to the
    impact unit vector.
    """
    dphi_dar, dphi_datheta = phi_sensitivities(state, pred, earth)
    i_r0, _, i_h = unit_triad(state.r, state.v)
    r0 = np.linalg.norm(state.r)
    v0 = np.linalg.norm(state.v)
    h = np.linalg.norm(np.cross(state.r, state.v))
    rdotv = float(np.dot(state.r, state.v))
    i_v0 = state.v / v0
    sphi, cphi = np.sin(pred.phi), np.cos(pred.phi)

    in_plane = (-(h * sphi + rdotv * cphi) * i_r0
                + (r0 * v0 * cphi) * i_v0) / h
    d_r = dphi_dar * in_plane
    d_theta = dphi_datheta * in_plane
    d_h = (r0 * sphi / h) * i_h
    return d_r, d_theta, d_h


def orbit_elements(state: StateVector, pred: ImpactPrediction,
                   earth: EarthModel) -> OrbitElements:
    """Elliptic elements and eccentric anomalies of the ballistic conic.

    The current anomaly is reflected to the descending branch when the
    radial rate is negative, and the impact anomaly always lies on the
    descending branch; the time-of-flight sensitivities require these
    continuations of the principal acos values.
    """
    r0 = np.linalg.norm(state.r)
    v0 = np.linalg.norm(state.v)
    h = np.linalg.norm(np.cross(state.r, state.v))
    mu = earth.mu

    a = 1.0 / (2.0 / r0 - v0 * v0 / mu)
    if a <= 0:
        raise NonElliptic(f"semimajor axis {a:.3e} <= 0")
    p = h * h / mu
    n = np.sqrt(mu / a**3)
    e_sq = 1.0 - p / a
    if e_sq < EPS_ECCENTRICITY**2:
        raise NearCircular(f"eccentricity^2 = {e_sq:.3e}")
    e = np.sqrt(e_sq)

    def anomaly(radius):
        x = (a - radius) / (a * e)
        if abs(x) > 1.0 + 1e-9:
            raise AnomalyDomain(f"cos(E) argument {x:.9f}")
        return np.arccos(np.clip(x, -1.0, 1.0))

    E0 = anomaly(r0)
    if np.dot(state.r, state.v) < 0:
        E0 = 2.0 * np.pi - E0
    Ep = 2.0 * np.pi - anomaly(earth.r_e)
    return OrbitElements(a=float(a), e=float(e), p=float(p), n=float(n),
                         E0=float(E0), Ep=float(Ep))


def tof_sensitivities(state: StateVector, pred: ImpactPrediction,
                      elems: OrbitElements, earth: EarthModel):
    """Time-of-flight sensitivity to a_r and a_theta, s per (m/s^2).

    Composed through the element rates: D_tf_ar = D_tf_adot * D_adot_ar
    + D_tf_edot * D_edot_ar (and the a_theta analogue). The total
    time-of-flight rate is -1 + dtf_dar * a_r + dtf_datheta * a_theta;
    the -1 is the free-fall clock and carries no sensitivity.
    """
    a, e, p, n = elems.a, elems.e, elems.p, elems.n
    E0, Ep = elems.E0, elems.Ep
    s0, sp = np.sin(E0), np.sin(Ep)
    if abs(s0) < EPS_SIN_ANOMALY or abs(sp) < EPS_SIN_ANOMALY:
        raise SingularAnomaly(f"sin(E0) = {s0:.3e}, sin(Ep) = {sp:.3e}")

    r0 = np.linalg.norm(state.r)
    v0 = np.linalg.norm(state.v)
    mu = earth.mu
    re = earth.r_e
    c0, cp = np.cos(E0), np.cos(Ep)

    dtf_dadot = (3.0 * pred.t_f / (2.0 * a)
                 - (re * (1.0 - e * cp) / sp - r0 * (1.0 - e * c0) / s0)
                 / (a * a * e * n))
    dtf_dedot = ((cp * (1.0 - e * cp) / (e * sp)
                  - c0 * (1.0 - e * c0) / (e * s0))
                 - (sp - s0)) / n

    sg, cg = np.sin(pred.gamma0), np.cos(pred.gamma0)
    dadot_dar = 2.0 * a * a * v0 * sg / mu
    dedot_dar = p * v0 * sg / (mu * e)
    dadot_datheta = 2.0 * a * a * v0 * cg / mu
    dedot_datheta = (p * a - r0 * r0) * v0 * cg / (mu * a * e)

    dtf_dar = dtf_dadot * dadot_dar + dtf_dedot * dedot_dar
    dtf_datheta = dtf_dadot * dadot_datheta + dtf_dedot * dedot_datheta
    return float(dtf_dar), float(dtf_datheta)


def rate_basis_ecef(state: StateVector, pred: ImpactPrediction,
                    basis_eci, tof_sens, earth: EarthModel):
    """ECEF drift directions from the ECI basis and t_f sensitivities.

    The in-plane directions pick up an Earth-rotation term proportional
    to their time-of-flight sensitivity; the out-of-plane direction does
    not change the time of flight and is purely rotated.
    """
    d_r, d_theta, d_h = basis_eci
    dtf_dar, dtf_datheta = tof_sens
    T = eci_to_ecef_matrix(pred.delta_t, earth)
    spin = earth.omega_e * np.array([pred.i_p_ecef[1], -pred.i_p_ecef[0], 0.0])
    d_r_e = dtf_dar * spin + T @ d_r
    d_theta_e = dtf_datheta * spin + T @ d_theta
    d_h_e = T @ d_h
    return d_r_e, d_theta_e, d_h_e


def compute_rate_basis(state: StateVector, pred: ImpactPrediction,
                       earth: EarthModel) -> IipRateBasis:
    """Full ECI + ECEF drift basis for one predicted state."""
    dphi_dar, dphi_datheta = phi_sensitivities(state, pred, earth)
    eci = rate_basis_eci(state, pred, earth)
    elems = orbit_elements(state, pred, earth)
    tof = tof_sensitivities(state, pred, elems, earth)
    ecef = rate_basis_ecef(state, pred, eci, tof, earth)
    return IipRateBasis(
        d_r=eci[0], d_theta=eci[1], d_h=eci[2],
        d_r_e=ecef[0], d_theta_e=ecef[1], d_h_e=ecef[2],
        dphi_dar=dphi_dar, dphi_datheta=dphi_datheta,
        dtf_dar=tof[0], dtf_datheta=tof[1],
    )
