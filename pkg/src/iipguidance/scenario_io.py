"""Scenario files: TOML in, TOML out.

The on-disk layout mirrors the sections of a Scenario with human units
(km, deg, tonnes, tonne-force); conversion to SI happens here and only
here. Unknown keys are rejected so typos cannot silently fall back to
defaults.
"""

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

import numpy as np

from .geo import EarthModel, StateVector, unit_from_latlon
from .guidance import TargetIip
from .sim import Scenario, VehicleModel, target_from_offsets

TONNE = 1000.0
TONF = 1000.0 * 9.80665


class ScenarioError(ValueError):
    """Malformed or incomplete scenario file."""


_SCHEMA = {
    "earth": {"mu", "r_e", "omega_e", "t_ref_s"},
    "vehicle": {"dry_mass_t", "propellant_t", "thrust_tonf", "isp_s"},
    "initial": {"r_km", "v_mps", "t_s"},
    "target": {"latlon_deg", "offsets"},
    "sim": {"dt_s", "max_time_s", "convergence_radius_m"},
}
_OFFSET_KEYS = {"downrange_km", "crossrange_km"}


def _require(table, section, keys):
    missing = keys - table.keys()
    if missing:
        raise ScenarioError(f"[{section}] missing keys: {sorted(missing)}")


def _check_unknown(table, section, allowed):
    unknown = table.keys() - allowed
    if unknown:
        raise ScenarioError(f"[{section}] unknown keys: {sorted(unknown)}")


def _vec3(value, key):
    if not isinstance(value, list) or len(value) != 3:
        raise ScenarioError(f"{key} must be a list of 3 numbers")
    return np.array([float(x) for x in value])


def parse_scenario(text: str) -> Scenario:
    """Parse scenario TOML text into a Scenario (SI units)."""
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ScenarioError(f"TOML parse error: {exc}") from exc

    _check_unknown(doc, "<root>", _SCHEMA.keys())
    missing = _SCHEMA.keys() - doc.keys()
    if missing:
        raise ScenarioError(f"missing sections: {sorted(missing)}")

    earth_tbl = doc["earth"]
    _check_unknown(earth_tbl, "earth", _SCHEMA["earth"])
    _require(earth_tbl, "earth", _SCHEMA["earth"])
    earth = EarthModel(mu=float(earth_tbl["mu"]),
                       r_e=float(earth_tbl["r_e"]),
                       omega_e=float(earth_tbl["omega_e"]),
                       t_ref=float(earth_tbl["t_ref_s"]))

    veh_tbl = doc["vehicle"]
    _check_unknown(veh_tbl, "vehicle", _SCHEMA["vehicle"])
    _require(veh_tbl, "vehicle", _SCHEMA["vehicle"])
    vehicle = VehicleModel(dry_mass=float(veh_tbl["dry_mass_t"]) * TONNE,
                           propellant_mass=float(veh_tbl["propellant_t"])
                           * TONNE,
                           thrust=float(veh_tbl["thrust_tonf"]) * TONF,
                           isp=float(veh_tbl["isp_s"]))

    init_tbl = doc["initial"]
    _check_unknown(init_tbl, "initial", _SCHEMA["initial"])
    _require(init_tbl, "initial", _SCHEMA["initial"])
    initial = StateVector(t=float(init_tbl["t_s"]),
                          r=_vec3(init_tbl["r_km"], "initial.r_km") * 1e3,
                          v=_vec3(init_tbl["v_mps"], "initial.v_mps"),
                          m=vehicle.initial_mass)

    tgt_tbl = doc["target"]
    _check_unknown(tgt_tbl, "target", _SCHEMA["target"])
    if ("latlon_deg" in tgt_tbl) == ("offsets" in tgt_tbl):
        raise ScenarioError(
            "[target] needs exactly one of latlon_deg / offsets")
    if "latlon_deg" in tgt_tbl:
        latlon = tgt_tbl["latlon_deg"]
        if not isinstance(latlon, list) or len(latlon) != 2:
            raise ScenarioError("target.latlon_deg must be [lat, lon]")
        target = TargetIip(u=unit_from_latlon(np.radians(float(latlon[0])),
                                              np.radians(float(latlon[1]))))
    else:
        off = tgt_tbl["offsets"]
        _check_unknown(off, "target.offsets", _OFFSET_KEYS)
        _require(off, "target.offsets", _OFFSET_KEYS)
        target = target_from_offsets(initial, float(off["downrange_km"]),
                                     float(off["crossrange_km"]), earth)

    sim_tbl = doc["sim"]
    _check_unknown(sim_tbl, "sim", _SCHEMA["sim"])
    _require(sim_tbl, "sim", _SCHEMA["sim"])
    return Scenario(earth=earth, vehicle=vehicle, initial=initial,
                    target=target, dt=float(sim_tbl["dt_s"]),
                    max_time=float(sim_tbl["max_time_s"]),
                    convergence_radius=float(
                        sim_tbl["convergence_radius_m"]))


def load_scenario(path) -> Scenario:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_scenario(fh.read())


def _fmt(value):
    if isinstance(value, list):
        return "[" + ", ".join(_fmt(v) for v in value) + "]"
    return f"{value:.17g}" if isinstance(value, float) else str(value)


def format_scenario(scenario: Scenario,
                    target_spec: dict | None = None) -> str:
    """Render a Scenario back to TOML text.

    A parsed target loses whether it came from latlon or offsets;
    target_spec (e.g. {"offsets": {...}} or {"latlon_deg": [...]})
    restores the original form, defaulting to explicit latlon.
    """
    earth, vehicle, initial = scenario.earth, scenario.vehicle, \
        scenario.initial
    if target_spec is None:
        lat = float(np.degrees(np.arcsin(scenario.target.u[2])))
        lon = float(np.degrees(np.arctan2(scenario.target.u[1],
                                          scenario.target.u[0])))
        target_spec = {"latlon_deg": [lat, lon]}

    lines = [
        "[earth]",
        f"mu = {_fmt(earth.mu)}",
        f"r_e = {_fmt(earth.r_e)}",
        f"omega_e = {_fmt(earth.omega_e)}",
        f"t_ref_s = {_fmt(earth.t_ref)}",
        "",
        "[vehicle]",
        f"dry_mass_t = {_fmt(vehicle.dry_mass / TONNE)}",
        f"propellant_t = {_fmt(vehicle.propellant_mass / TONNE)}",
        f"thrust_tonf = {_fmt(vehicle.thrust / TONF)}",
        f"isp_s = {_fmt(vehicle.isp)}",
        "",
        "[initial]",
        f"r_km = {_fmt([float(x) / 1e3 for x in initial.r])}",
        f"v_mps = {_fmt([float(x) for x in initial.v])}",
        f"t_s = {_fmt(initial.t)}",
        "",
    ]
    if "latlon_deg" in target_spec:
        lines += ["[target]",
                  f"latlon_deg = {_fmt(list(target_spec['latlon_deg']))}",
                  ""]
    else:
        off = target_spec["offsets"]
        lines += ["[target.offsets]",
                  f"downrange_km = {_fmt(float(off['downrange_km']))}",
                  f"crossrange_km = {_fmt(float(off['crossrange_km']))}",
                  ""]
    lines += [
        "[sim]",
        f"dt_s = {_fmt(scenario.dt)}",
        f"max_time_s = {_fmt(scenario.max_time)}",
        f"convergence_radius_m = {_fmt(scenario.convergence_radius)}",
        "",
    ]
    return "\n".join(lines)


def save_scenario(scenario: Scenario, path, target_spec=None):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_scenario(scenario, target_spec))
