"""Hourly input series: CSV ingestion and seeded synthesis.

Hour index ``i`` of any series covers the interval ``[i, i+1)`` hours from the
start of the year. Day ``d`` is indices ``24*d .. 24*d+23``.
"""

import csv
import heapq
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DomainError, LengthError, ParseError

HOURS_PER_YEAR = 8760
DAYS_PER_YEAR = 365
IRRADIANCE_SANITY_MAX = 1500.0
QUANTITIES = ("irradiance_W_per_m2", "load_kW", "charging_kW")

KISH_LATITUDE_DEG = 26.533


@dataclass(frozen=True, eq=False)
class HourlyTimeSeries:
    quantity: str
    values: np.ndarray
    year_label: str = ""

    def __post_init__(self):
        if self.quantity not in QUANTITIES:
            raise DomainError(f"unknown quantity {self.quantity!r}")
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1 or values.size != HOURS_PER_YEAR:
            raise LengthError(f"expected {HOURS_PER_YEAR} hourly values, got {values.size}")
        if not np.all(np.isfinite(values)) or np.any(values < 0):
            raise DomainError("series values must be finite and >= 0")
        if self.quantity == "irradiance_W_per_m2" and values.max() > IRRADIANCE_SANITY_MAX:
            raise DomainError(f"irradiance above {IRRADIANCE_SANITY_MAX} W/m2")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __len__(self):
        return self.values.size


@dataclass(frozen=True)
class PhevFleetConfig:
    fleet_size: int = 50
    arrival_window_start_T0: float = 7.0
    arrival_window_end_T1: float = 10.0
    departure_hour_T2: int = 17
    charge_rate_psi: float = 4.0
    demand_upper: float = 10.4
    workdays_per_year: int = 261
    rng_seed: int = 0
    # plugs assumed when deriving the unmanaged profile; None means one per vehicle
    unmanaged_plugs: int | None = None

    def __post_init__(self):
        if self.fleet_size < 0:
            raise DomainError("fleet_size must be >= 0")
        if not 0 <= self.arrival_window_start_T0 <= self.arrival_window_end_T1:
            raise DomainError("need 0 <= T0 <= T1")
        if not self.departure_hour_T2 > self.arrival_window_end_T1:
            raise DomainError("departure hour T2 must be later than T1")
        if self.departure_hour_T2 != int(self.departure_hour_T2) or self.departure_hour_T2 > 24:
            raise DomainError("T2 must be a whole hour of the day, at most 24")
        if self.charge_rate_psi <= 0 or self.demand_upper <= 0:
            raise DomainError("charge rate and demand upper bound must be > 0")
        if not 0 <= self.workdays_per_year <= DAYS_PER_YEAR:
            raise DomainError("workdays_per_year must lie in [0, 365]")
        if self.unmanaged_plugs is not None and self.unmanaged_plugs < 1:
            raise DomainError("unmanaged_plugs must be >= 1")

    @property
    def profile_plugs(self):
        return self.unmanaged_plugs if self.unmanaged_plugs is not None else max(self.fleet_size, 1)


@dataclass(frozen=True, eq=False)
class DailyArrivalSchedule:
    """Per-day PHEV arrivals; ``arrivals[d]`` and ``demands_kWh[d]`` align."""

    arrivals: tuple
    demands_kWh: tuple
    workdays: np.ndarray

    @property
    def n_days(self):
        return len(self.arrivals)

    def total_arrivals(self):
        return sum(len(a) for a in self.arrivals)

    def day_request_kWh(self):
        return np.array([float(np.sum(d)) for d in self.demands_kWh])

    def __eq__(self, other):
        if not isinstance(other, DailyArrivalSchedule):
            return NotImplemented
        return (np.array_equal(self.workdays, other.workdays)
                and all(np.array_equal(a, b) for a, b in zip(self.arrivals, other.arrivals))
                and all(np.array_equal(a, b) for a, b in zip(self.demands_kWh, other.demands_kWh))
                and self.n_days == other.n_days)


def workday_flags(n_days=DAYS_PER_YEAR, workdays_per_year=261):
    """Five-on/two-off week from day 0, adjusted to exactly ``workdays_per_year`` in a year.

    Surplus workdays are dropped from the end of the year; missing ones are
    taken from the earliest weekend days.
    """
    year = np.array([d % 7 < 5 for d in range(DAYS_PER_YEAR)])
    surplus = int(year.sum()) - workdays_per_year
    if surplus > 0:
        idx = np.flatnonzero(year)[::-1][:surplus]
        year[idx] = False
    elif surplus < 0:
        idx = np.flatnonzero(~year)[:-surplus]
        year[idx] = True
    reps = math.ceil(n_days / DAYS_PER_YEAR)
    return np.tile(year, reps)[:n_days]


def load_series_csv(path, quantity) -> HourlyTimeSeries:
    """Read a one-column, header-less CSV of 8760 hourly values."""
    path = Path(path)
    values = []
    with path.open(newline="", encoding="utf-8") as fh:
        for row_no, row in enumerate(csv.reader(fh), start=1):
            if len(row) != 1:
                raise ParseError(f"expected one column, got {len(row)}", row=row_no)
            try:
                v = float(row[0])
            except ValueError:
                raise ParseError(f"not a number: {row[0]!r}", row=row_no) from None
            if not math.isfinite(v) or v < 0:
                raise ParseError(f"value must be finite and >= 0, got {row[0]!r}", row=row_no)
            values.append(v)
    if len(values) != HOURS_PER_YEAR:
        raise LengthError(f"{path}: expected {HOURS_PER_YEAR} rows, got {len(values)}")
    return HourlyTimeSeries(quantity, np.array(values), year_label=path.stem)


def write_series_csv(series: HourlyTimeSeries, path):
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        for v in series.values:
            fh.write(f"{float(v)!r}\n")


def synthesize_office_load(peak_kW, seed, n_days=DAYS_PER_YEAR) -> HourlyTimeSeries:
    """Office demand with a working-hours plateau and a hot-season bump.

    Weekday hours 08-18 sit between 60 and 100 % of peak, all other hours
    between 10 and 35 %. The largest hour equals ``peak_kW`` exactly.
    """
    if not peak_kW > 0:
        raise DomainError(f"peak must be > 0, got {peak_kW}")
    rng = np.random.default_rng(seed)
    hours = np.arange(n_days * 24)
    hod = hours % 24
    day = hours // 24
    working = workday_flags(n_days)[day] & (hod >= 8) & (hod < 18)

    # cooling demand peaks mid-year and mid-afternoon
    season = 0.5 - 0.5 * np.cos(2.0 * np.pi * (day - 15) / 365.0)
    afternoon = np.exp(-0.5 * ((hod - 14.0) / 3.0) ** 2)
    day_noise = rng.normal(0.0, 0.06, n_days)[day]
    hour_noise = rng.normal(0.0, 0.04, hours.size)

    on = 0.62 + 0.22 * season + 0.10 * afternoon + day_noise + hour_noise
    off = 0.15 + 0.10 * season + 0.5 * hour_noise + 0.5 * day_noise
    frac = np.where(working, np.clip(on, 0.60, 1.0), np.clip(off, 0.10, 0.35))
    frac[np.argmax(frac)] = 1.0
    return HourlyTimeSeries("load_kW", frac * peak_kW, year_label=f"synthetic-office-{seed}")


def synthesize_irradiance(seed, latitude_deg=KISH_LATITUDE_DEG, mean_clearness=0.68,
                          n_days=DAYS_PER_YEAR) -> HourlyTimeSeries:
    """Hourly global irradiance on a latitude-tilted plane (W/m2).

    Clear-sky beam plus diffuse on a south-facing plane tilted at the site
    latitude, scaled by a seeded daily clearness index (Beta distributed with
    the given mean) and a little hourly jitter. Solar time is used throughout.
    """
    if not 0.0 < mean_clearness < 1.0:
        raise DomainError("mean_clearness must lie in (0, 1)")
    rng = np.random.default_rng(seed)
    conc = 12.0
    kt_day = rng.beta(mean_clearness * conc, (1.0 - mean_clearness) * conc, n_days)
    jitter = np.clip(rng.normal(1.0, 0.05, n_days * 24), 0.8, 1.2)

    lat = math.radians(latitude_deg)
    hours = np.arange(n_days * 24)
    doy = hours // 24 % 365 + 1
    mid_hour = hours % 24 + 0.5
    decl = np.radians(23.45) * np.sin(2.0 * np.pi * (284 + doy) / 365.0)
    omega = np.radians(15.0 * (mid_hour - 12.0))
    cos_zen = np.sin(lat) * np.sin(decl) + np.cos(lat) * np.cos(decl) * np.cos(omega)
    # latitude-tilted, equator-facing plane: incidence as at the equator
    cos_inc = np.cos(decl) * np.cos(omega)
    sun_up = cos_zen > 0.0

    g0 = 1367.0 * (1.0 + 0.033 * np.cos(2.0 * np.pi * doy / 365.0))
    air_mass = np.where(sun_up, 1.0 / np.maximum(cos_zen, 0.05), np.inf)
    beam_normal = g0 * 0.7 ** (air_mass ** 0.678)
    beam = beam_normal * np.clip(cos_inc, 0.0, None)
    diffuse = 0.1 * beam_normal * np.clip(cos_zen, 0.0, None)
    clear = np.where(sun_up, beam + diffuse, 0.0)

    g = clear * (kt_day[hours // 24] / 0.75) * jitter
    g = np.clip(g, 0.0, IRRADIANCE_SANITY_MAX - 1.0)
    return HourlyTimeSeries("irradiance_W_per_m2", g, year_label=f"synthetic-kish-{seed}")


def synthesize_phev_fleet(cfg: PhevFleetConfig, n_days=DAYS_PER_YEAR) -> DailyArrivalSchedule:
    """Seeded arrivals and energy requests, uniform on their ranges, workdays only."""
    rng = np.random.default_rng(cfg.rng_seed)
    workdays = workday_flags(n_days, cfg.workdays_per_year)
    empty = np.zeros(0)
    arrivals, demands = [], []
    for is_work in workdays:
        if is_work and cfg.fleet_size > 0:
            arrivals.append(rng.uniform(cfg.arrival_window_start_T0, cfg.arrival_window_end_T1,
                                        cfg.fleet_size))
            demands.append(rng.uniform(0.0, cfg.demand_upper, cfg.fleet_size))
        else:
            arrivals.append(empty)
            demands.append(empty)
    return DailyArrivalSchedule(tuple(arrivals), tuple(demands), workdays)


def _bin_interval(out, start, stop, rate):
    """Add ``rate`` kW over continuous hours [start, stop) into hourly bins."""
    h = int(math.floor(start))
    while start < stop:
        edge = min(float(h + 1), stop)
        out[h] += rate * (edge - start)
        start = edge
        h += 1


def unmanaged_day(arrivals, demands, cfg: PhevFleetConfig, evse_count):
    """First-come-first-served plug allocation for one day.

    Returns ``(station_kW[24], undelivered_kWh)``; station power is on the
    vehicle side, i.e. before EVSE losses.
    """
    out = np.zeros(24)
    if len(arrivals) == 0:
        return out, 0.0
    if evse_count < 1:
        return out, float(np.sum(demands))
    psi = cfg.charge_rate_psi
    deadline = float(cfg.departure_hour_T2)
    plugs = [0.0] * int(evse_count)
    undelivered = 0.0
    for i in np.argsort(arrivals, kind="stable"):
        free_at = heapq.heappop(plugs)
        start = max(float(arrivals[i]), free_at)
        stop = min(start + float(demands[i]) / psi, deadline)
        if stop <= start:
            undelivered += float(demands[i])
            heapq.heappush(plugs, free_at)
            continue
        _bin_interval(out, start, stop, psi)
        undelivered += float(demands[i]) - psi * (stop - start)
        heapq.heappush(plugs, stop)
    return out, max(undelivered, 0.0)


def unmanaged_charging_profile(schedule: DailyArrivalSchedule, cfg: PhevFleetConfig,
                               evse_count, with_undelivered=False):
    """Station demand when every PHEV charges at full rate as soon as it gets a plug.

    With ``with_undelivered`` the per-day energy that could not be delivered
    before the departure hour is returned as well.
    """
    if evse_count < 1:
        raise DomainError(f"evse_count must be >= 1, got {evse_count}")
    values, undelivered = _profile_arrays(schedule, cfg, evse_count)
    series = HourlyTimeSeries("charging_kW", values, year_label="unmanaged")
    return (series, undelivered) if with_undelivered else series


def _profile_arrays(schedule, cfg, evse_count):
    values = np.zeros(schedule.n_days * 24)
    undelivered = np.zeros(schedule.n_days)
    for d, (arr, dem) in enumerate(zip(schedule.arrivals, schedule.demands_kWh)):
        values[24 * d:24 * d + 24], undelivered[d] = unmanaged_day(arr, dem, cfg, evse_count)
    return values, undelivered
