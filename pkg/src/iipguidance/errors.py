"""Exception hierarchy for the IIP guidance library."""


class IipError(Exception):
    """Base class for all library-specific errors."""


class DegenerateAngularMomentum(IipError):
    """r and v are (nearly) parallel; the orbital plane is undefined."""


class NotUnit(IipError):
    """A vector documented as unit-norm is not."""


class NoImpact(IipError):
    """The ballistic trajectory never descends to the Earth's surface."""


class VerticalFlight(IipError):
    """Flight path angle is +/-90 deg; the impact direction is singular."""


class HyperbolicState(IipError):
    """Speed at or above escape; the elliptic time-of-flight form is invalid."""


class PhiZero(IipError):
    """Angle of flight is not positive; no forward arc to the impact point."""


class NonElliptic(IipError):
    """Semimajor axis is not positive; orbit-element sensitivities undefined."""


class NearCircular(IipError):
    """Eccentricity below threshold; sensitivity formulas divide by e."""


class AnomalyDomain(IipError):
    """Eccentric-anomaly cosine argument outside [-1, 1]."""


class SingularAnomaly(IipError):
    """sin(E) too close to zero at the current or impact point."""


class SingularDenominator(IipError):
    """Grazing geometry: the shared phi-rate denominator vanishes."""


class DegenerateObjective(IipError):
    """Objective gradient lies entirely along the forbidden direction."""


class ZeroConstraint(IipError):
    """Constraint vector vanishes; the tangency constraint is vacuous."""


class Converged(IipError):
    """Current IIP already coincides with the target."""


class Antipodal(IipError):
    """Target IIP is antipodal to the current IIP; arc direction undefined."""


class GuidanceHold(IipError):
    """Recoverable singularity; caller should reuse the previous command."""
