"""Run configuration: one INI file per run.

Sections and keys (all optional; defaults reproduce the reference setup)::

    [run]          scenario, seed, output_dir
    [irradiance]   file = <csv>        | synthetic = true, latitude_deg, mean_clearness
    [office_load]  file = <csv>        | synthetic = true, peak_kW
    [station]      profile_file = <csv> | synthetic = true
    [fleet]        fleet_size, arrival_window_start_T0, arrival_window_end_T1,
                   departure_hour_T2, charge_rate_psi, demand_upper,
                   workdays_per_year, unmanaged_plugs
    [physics]      eta_g, area_m2, eta_el, eta_fc, eta_conv, eta_sta, eta_storage,
                   hhv_kWh_per_kg, tank_floor_fraction, initial_tank_fraction,
                   discharge_mode
    [economics]    interest_rate, project_years
    [cost.<dim>]   capital, replacement, maintenance, lifetime_yr   (dim is a sizing field)
    [pso]          swarm_size, max_iterations, inertia, c1, c2, velocity_clamp, penalty_weight
    [bounds]       <dim> = lo, hi
    [sizing]       <dim> = value

Each profile takes exactly one source. Relative paths resolve against the
directory holding the config file. A single ``seed`` drives every synthesis
and the swarm.
"""

import configparser
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from .agents import Scenario, SimulationConfig, SystemSizing
from .components import PvParams
from .economics import SIZING_FIELDS, ComponentCatalog
from .errors import ConfigError, MicrogridError
from .optimizer import DEFAULT_BOUNDS, PsoConfig
from .profiles import (
    HOURS_PER_YEAR,
    KISH_LATITUDE_DEG,
    PhevFleetConfig,
    load_series_csv,
    synthesize_irradiance,
    synthesize_office_load,
    synthesize_phev_fleet,
)

SECTIONS = ("run", "irradiance", "office_load", "station", "fleet", "physics", "economics",
            "pso", "bounds", "sizing")
_SYNTH_KEYS = {
    "irradiance": {"latitude_deg": KISH_LATITUDE_DEG, "mean_clearness": 0.68},
    "office_load": {"peak_kW": 60.0},
    "station": {},
}
_FILE_KEY = {"irradiance": "file", "office_load": "file", "station": "profile_file"}
_QUANTITY = {"irradiance": "irradiance_W_per_m2", "office_load": "load_kW", "station": "charging_kW"}
_PSO_KEYS = ("swarm_size", "max_iterations", "inertia", "c1", "c2", "velocity_clamp", "penalty_weight")
_COST_KEYS = ("capital", "replacement", "maintenance", "lifetime_yr")


@dataclass(frozen=True)
class ProfileSource:
    """Either a CSV path or synthesis parameters, never both."""

    path: Path | None = None
    params: dict = field(default_factory=dict)

    @property
    def synthetic(self):
        return self.path is None


@dataclass(frozen=True)
class RunConfig:
    scenario: Scenario = Scenario.DEFERRABLE
    seed: int = 0
    output_dir: Path = Path("out")
    irradiance: ProfileSource = field(default_factory=lambda: ProfileSource(params=dict(_SYNTH_KEYS["irradiance"])))
    office_load: ProfileSource = field(default_factory=lambda: ProfileSource(params=dict(_SYNTH_KEYS["office_load"])))
    station: ProfileSource = field(default_factory=ProfileSource)
    sim: SimulationConfig = field(default_factory=SimulationConfig)
    catalog: ComponentCatalog = field(default_factory=ComponentCatalog)
    pso: PsoConfig = field(default_factory=PsoConfig)
    sizing: SystemSizing | None = None

    def with_overrides(self, scenario=None, seed=None, output_dir=None, sizing=None):
        rc = self
        if scenario is not None:
            rc = replace(rc, scenario=Scenario.parse(scenario))
        if seed is not None:
            rc = replace(rc, seed=int(seed),
                         sim=replace(rc.sim, fleet=replace(rc.sim.fleet, rng_seed=int(seed))),
                         pso=replace(rc.pso, rng_seed=int(seed)))
        if output_dir is not None:
            rc = replace(rc, output_dir=Path(output_dir))
        if sizing is not None:
            rc = replace(rc, sizing=sizing)
        return rc


def _get(section, key, conv, default, name):
    if key not in section:
        return default
    raw = section[key].strip()
    try:
        return conv(raw)
    except (ValueError, TypeError):
        raise ConfigError(f"cannot parse {raw!r}", name) from None


def _bool(raw):
    low = raw.lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(raw)


def _int(raw):
    v = float(raw)
    if v != int(v):
        raise ValueError(raw)
    return int(v)


def _optional_int(raw):
    return None if raw.lower() in ("", "none") else _int(raw)


def _pair(raw):
    lo, hi = (float(p) for p in raw.split(","))
    return lo, hi


def _check_keys(cp, section, allowed):
    if not cp.has_section(section):
        return
    for key in cp[section]:
        if key not in allowed:
            raise ConfigError("unknown key", f"{section}.{key}")


def _profile(cp, name, base_dir):
    file_key = _FILE_KEY[name]
    defaults = _SYNTH_KEYS[name]
    _check_keys(cp, name, {file_key, "synthetic", *defaults})
    sec = cp[name] if cp.has_section(name) else {}
    has_file = file_key in sec
    synthetic = _get(sec, "synthetic", _bool, not has_file, f"{name}.synthetic")
    if has_file and synthetic:
        raise ConfigError("give either a file or synthetic = true, not both", f"{name}.{file_key}")
    if not has_file and not synthetic:
        raise ConfigError("no source: set a file or synthetic = true", f"{name}.{file_key}")
    if has_file:
        extra = [k for k in defaults if k in sec]
        if extra:
            raise ConfigError("synthesis parameter given with a file source", f"{name}.{extra[0]}")
        path = Path(sec[file_key].strip())
        if not path.is_absolute():
            path = base_dir / path
        if not path.is_file():
            raise ConfigError(f"file not found: {path}", f"{name}.{file_key}")
        return ProfileSource(path=path)
    params = {k: _get(sec, k, float, v, f"{name}.{k}") for k, v in defaults.items()}
    return ProfileSource(params=params)


def _dataclass_section(cp, section, cls, base, convs):
    _check_keys(cp, section, set(convs))
    if not cp.has_section(section):
        return base
    sec = cp[section]
    changes = {k: _get(sec, k, conv, None, f"{section}.{k}") for k, conv in convs.items() if k in sec}
    try:
        return replace(base, **changes)
    except MicrogridError as exc:
        raise ConfigError(str(exc), f"{section}.{next(iter(changes), '')}") from None


def load_config(path=None) -> RunConfig:
    """Parse a config file; ``None`` gives the all-default configuration."""
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str  # keys are case sensitive (peak_kW, hhv_kWh_per_kg)
    base_dir = Path.cwd()
    if path is not None:
        path = Path(path)
        if not path.is_file():
            raise ConfigError(f"config file not found: {path}", "--config")
        try:
            cp.read(path, encoding="utf-8")
        except configparser.Error as exc:
            raise ConfigError(f"malformed config: {exc}", str(path)) from None
        base_dir = path.resolve().parent
    for name in cp.sections():
        if name not in SECTIONS and not (name.startswith("cost.") and name[5:] in SIZING_FIELDS):
            raise ConfigError("unknown section", name)

    _check_keys(cp, "run", {"scenario", "seed", "output_dir"})
    run = cp["run"] if cp.has_section("run") else {}
    try:
        scenario = Scenario.parse(run.get("scenario", "deferrable").strip())
    except MicrogridError:
        raise ConfigError(f"unknown scenario {run['scenario']!r}", "run.scenario") from None
    seed = _get(run, "seed", _int, 0, "run.seed")
    output_dir = Path(run["output_dir"].strip()) if "output_dir" in run else Path("out")

    fleet = _dataclass_section(cp, "fleet", PhevFleetConfig, PhevFleetConfig(rng_seed=seed), {
        "fleet_size": _int, "arrival_window_start_T0": float, "arrival_window_end_T1": float,
        "departure_hour_T2": _int, "charge_rate_psi": float, "demand_upper": float,
        "workdays_per_year": _int, "unmanaged_plugs": _optional_int})
    pv_keys = {"eta_g": float, "area_m2": float}
    sim_keys = {"eta_el": float, "eta_fc": float, "eta_conv": float, "eta_sta": float,
                "eta_storage": float, "hhv_kWh_per_kg": float, "tank_floor_fraction": float,
                "initial_tank_fraction": float, "discharge_mode": str}
    _check_keys(cp, "physics", set(pv_keys) | set(sim_keys))
    phys = cp["physics"] if cp.has_section("physics") else {}
    pv = PvParams(**{k: _get(phys, k, c, getattr(PvParams(), k), f"physics.{k}") for k, c in pv_keys.items()})
    sim_changes = {k: _get(phys, k, c, None, f"physics.{k}") for k, c in sim_keys.items() if k in phys}
    try:
        sim = SimulationConfig(pv=pv, fleet=fleet, **sim_changes)
    except MicrogridError as exc:
        raise ConfigError(str(exc), "physics") from None

    catalog = _dataclass_section(cp, "economics", ComponentCatalog, ComponentCatalog(),
                                 {"interest_rate": float, "project_years": float})
    for dim in SIZING_FIELDS:
        name = f"cost.{dim}"
        _check_keys(cp, name, set(_COST_KEYS))
        if cp.has_section(name):
            changes = {k: _get(cp[name], k, float, None, f"{name}.{k}") for k in _COST_KEYS if k in cp[name]}
            try:
                catalog = catalog.with_spec(dim, **changes)
            except MicrogridError as exc:
                raise ConfigError(str(exc), name) from None

    _check_keys(cp, "bounds", set(SIZING_FIELDS))
    bsec = cp["bounds"] if cp.has_section("bounds") else {}
    bounds = tuple(_get(bsec, d, _pair, DEFAULT_BOUNDS[i], f"bounds.{d}") for i, d in enumerate(SIZING_FIELDS))
    pso_convs = {k: (_int if k in ("swarm_size", "max_iterations") else float) for k in _PSO_KEYS}
    try:
        pso = _dataclass_section(cp, "pso", PsoConfig, PsoConfig(bounds=bounds, rng_seed=seed), pso_convs)
    except ConfigError:
        raise
    except MicrogridError as exc:
        raise ConfigError(str(exc), "bounds") from None

    sizing = None
    if cp.has_section("sizing"):
        _check_keys(cp, "sizing", set(SIZING_FIELDS))
        vals = {d: _get(cp["sizing"], d, float, 0.0, f"sizing.{d}") for d in SIZING_FIELDS}
        try:
            sizing = SystemSizing(**vals)
        except MicrogridError as exc:
            raise ConfigError(str(exc), "sizing") from None

    return RunConfig(scenario, seed, output_dir,
                     _profile(cp, "irradiance", base_dir), _profile(cp, "office_load", base_dir),
                     _profile(cp, "station", base_dir), sim, catalog, pso, sizing)


def load_profiles(rc: RunConfig):
    """Realize ``(irradiance, office_load, station)`` once for a run.

    The station is an arrival schedule when synthetic, else a fixed profile.
    """
    def from_file(name):
        src = getattr(rc, name)
        try:
            return load_series_csv(src.path, _QUANTITY[name])
        except MicrogridError as exc:
            raise ConfigError(f"{src.path}: {exc}", f"{name}.{_FILE_KEY[name]}") from None

    def series(name, synth):
        src = getattr(rc, name)
        return synth(**src.params) if src.synthetic else from_file(name)

    g = series("irradiance", lambda **p: synthesize_irradiance(rc.seed, **p))
    load = series("office_load", lambda **p: synthesize_office_load(p["peak_kW"], rc.seed))
    if rc.station.synthetic:
        station = synthesize_phev_fleet(rc.sim.fleet, HOURS_PER_YEAR // 24)
    else:
        station = from_file("station")
    return g, load, station


def _fmt(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return "none" if v is None else str(v)


def dump_config(rc: RunConfig, sizing: SystemSizing | None = None) -> str:
    """Serialize every setting explicitly, so the text alone reproduces the run."""
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    # output_dir is left out so re-running the emitted file never overwrites its source run
    cp["run"] = {"scenario": rc.scenario.value, "seed": str(rc.seed)}
    for name in ("irradiance", "office_load", "station"):
        src = getattr(rc, name)
        if src.synthetic:
            cp[name] = {"synthetic": "true", **{k: _fmt(v) for k, v in src.params.items()}}
        else:
            cp[name] = {_FILE_KEY[name]: str(src.path)}
    fleet = rc.sim.fleet
    cp["fleet"] = {f.name: _fmt(getattr(fleet, f.name)) for f in fields(fleet) if f.name != "rng_seed"}
    phys = {"eta_g": _fmt(rc.sim.pv.eta_g), "area_m2": _fmt(rc.sim.pv.area_m2)}
    phys.update({f.name: _fmt(getattr(rc.sim, f.name)) for f in fields(rc.sim)
                 if f.name not in ("pv", "fleet")})
    cp["physics"] = phys
    cp["economics"] = {"interest_rate": _fmt(rc.catalog.interest_rate),
                       "project_years": _fmt(rc.catalog.project_years)}
    for dim in SIZING_FIELDS:
        spec = rc.catalog.specs[dim]
        cp[f"cost.{dim}"] = {k: _fmt(float(getattr(spec, k))) for k in _COST_KEYS}
    cp["pso"] = {k: _fmt(getattr(rc.pso, k)) for k in _PSO_KEYS}
    cp["bounds"] = {d: f"{lo!r}, {hi!r}" for d, (lo, hi) in zip(SIZING_FIELDS, rc.pso.bounds)}
    sizing = sizing if sizing is not None else rc.sizing
    if sizing is not None:
        cp["sizing"] = {d: _fmt(getattr(sizing, d)) for d in SIZING_FIELDS}

    lines = []
    for name in cp.sections():
        lines.append(f"[{name}]")
        lines.extend(f"{k} = {v}" for k, v in cp[name].items())
        lines.append("")
    return "\n".join(lines)
