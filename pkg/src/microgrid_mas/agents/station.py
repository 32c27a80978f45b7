"""Preparation of the station agent's yearly inputs."""

from dataclasses import dataclass

import numpy as np

from ..errors import ContractError, LengthError
from ..profiles import DailyArrivalSchedule, HourlyTimeSeries, PhevFleetConfig, unmanaged_day, workday_flags


@dataclass(frozen=True, eq=False)
class StationInput:
    """Unmanaged demand and per-day totals for a horizon.

    ``base_kW`` is vehicle-side; ``requested_kWh`` and ``undelivered_kWh``
    are DC-side (already divided by eta_sta).
    """

    base_kW: np.ndarray
    requested_kWh: np.ndarray
    undelivered_kWh: np.ndarray
    workdays: np.ndarray

    @property
    def n_hours(self):
        return self.base_kW.size


def station_input(station, fleet: PhevFleetConfig, eta_sta, n_hours) -> StationInput:
    """Build station inputs from an arrival schedule or a fixed charging profile.

    A schedule is turned into the unmanaged first-come-first-served profile
    for ``fleet.profile_plugs`` plugs, so the profile does not depend on the
    EVSE count being sized; that count only caps the draw hour by hour. A
    profile is taken as is and must be zero outside the workday charging
    window.
    """
    n_days = n_hours // 24
    if isinstance(station, DailyArrivalSchedule):
        if station.n_days < n_days:
            raise LengthError(f"schedule covers {station.n_days} days, horizon needs {n_days}")
        base = np.zeros(n_hours)
        undelivered = np.zeros(n_days)
        for d in range(n_days):
            base[24 * d:24 * d + 24], undelivered[d] = unmanaged_day(
                station.arrivals[d], station.demands_kWh[d], fleet, fleet.profile_plugs)
        requested = np.array([float(np.sum(station.demands_kWh[d])) for d in range(n_days)])
        workdays = np.asarray(station.workdays[:n_days], dtype=bool)
        return StationInput(base, requested / eta_sta, undelivered / eta_sta, workdays)

    values = station.values if isinstance(station, HourlyTimeSeries) else np.asarray(station, float)
    if values.size != n_hours:
        raise LengthError(f"station profile has {values.size} hours, horizon has {n_hours}")
    base = np.array(values, dtype=float)
    workdays = workday_flags(n_days, fleet.workdays_per_year)
    by_day = base.reshape(n_days, 24)
    outside = by_day[:, int(fleet.departure_hour_T2):].sum(axis=1) + by_day.sum(axis=1) * ~workdays
    if np.any(outside > 0):
        raise ContractError("fixed station profile has demand outside the workday charging window")
    return StationInput(base, by_day.sum(axis=1) / eta_sta, np.zeros(n_days), workdays)
