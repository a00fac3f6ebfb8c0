import numpy as np
import pytest

from iipguidance.geo import EarthModel, StateVector
from iipguidance.sim import VehicleModel


@pytest.fixture(scope="session")
def earth():
    return EarthModel()


@pytest.fixture(scope="session")
def earth_ref():
    """Earth model with the case-study reference epoch."""
    return EarthModel(t_ref=-240.0)


@pytest.fixture(scope="session")
def stage_state():
    """Separated-stage flight condition: 125.5 km altitude, 1.843 km/s."""
    return StateVector(t=0.0,
                       r=np.array([1164.0e3, -5507.0e3, 3258.0e3]),
                       v=np.array([1337.0, 743.0, 1029.0]),
                       m=79200.0)


@pytest.fixture(scope="session")
def stage_vehicle():
    return VehicleModel(dry_mass=22.2e3, propellant_mass=57.0e3,
                        thrust=279.6e3 * 9.80665, isp=311.0)


def random_state(rng, earth, alt=(50e3, 300e3), speed=(500.0, 3000.0),
                 gamma_deg=(-30.0, 45.0)):
    """Random boostback-envelope state with an arbitrary orbital plane."""
    altitude = rng.uniform(*alt)
    v0 = rng.uniform(*speed)
    gamma = np.radians(rng.uniform(*gamma_deg))
    up = rng.normal(size=3)
    up /= np.linalg.norm(up)
    horiz = rng.normal(size=3)
    horiz -= up * np.dot(horiz, up)
    horiz /= np.linalg.norm(horiz)
    r = (earth.r_e + altitude) * up
    v = v0 * (np.cos(gamma) * horiz + np.sin(gamma) * up)
    return StateVector(t=0.0, r=r, v=v)
