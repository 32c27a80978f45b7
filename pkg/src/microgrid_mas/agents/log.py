import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

HOURLY_COLUMNS = (
    "p_pv", "p_load", "p_sta_requested", "p_pv_sta", "p_pv_el", "p_el_tank",
    "p_tank_fc", "p_fc_conv", "p_dump", "tank_energy", "q_load",
)
# extra columns written after the documented ones
EXTRA_COLUMNS = ("p_load_served",)
DEPARTURE_COLUMNS = ("day", "q_sta_kWh", "requested_kWh", "delivered_kWh")


@dataclass(eq=False)
class SimulationLog:
    """Hour-by-hour record of one simulation run.

    ``p_sta_requested`` is the EVSE draw asked for at the DC bus (vehicle-side
    demand over eta_sta, capped by the plugs). ``tank_energy`` is the content
    at the end of each hour. ``departures`` has one row per workday with the
    columns of :data:`DEPARTURE_COLUMNS`.
    """

    hourly: dict
    departures: np.ndarray
    initial_tank_energy: float
    final_tank_energy: float
    tank_floor: float = 0.0
    tank_capacity: float = 0.0
    scenario: str = ""
    meta: dict = field(default_factory=dict)

    def __getattr__(self, name):
        hourly = self.__dict__.get("hourly")
        if hourly is not None and name in hourly:
            return hourly[name]
        raise AttributeError(name)

    @property
    def n_hours(self):
        return self.hourly["p_pv"].size

    @property
    def q_sta(self):
        return self.departures[:, 1]

    @property
    def station_requested(self):
        return self.departures[:, 2]

    def dump_energy(self):
        return float(np.sum(self.hourly["p_dump"]))

    def write_csv(self, hourly_path, departures_path):
        hourly_path, departures_path = Path(hourly_path), Path(departures_path)
        cols = HOURLY_COLUMNS + EXTRA_COLUMNS
        with hourly_path.open("w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(("hour",) + cols)
            data = np.column_stack([self.hourly[c] for c in cols])
            for i, row in enumerate(data):
                w.writerow([i] + [repr(float(v)) for v in row])
        with departures_path.open("w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(DEPARTURE_COLUMNS)
            for row in self.departures:
                w.writerow([int(row[0])] + [repr(float(v)) for v in row[1:]])

    def equals(self, other):
        """Bit-identical comparison of every recorded value."""
        return (
            self.hourly.keys() == other.hourly.keys()
            and all(np.array_equal(self.hourly[k], other.hourly[k]) for k in self.hourly)
            and np.array_equal(self.departures, other.departures)
            and self.initial_tank_energy == other.initial_tank_energy
            and self.final_tank_energy == other.final_tank_energy
        )


def read_departures_csv(path):
    return np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
