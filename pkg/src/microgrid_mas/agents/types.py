from dataclasses import dataclass, field, fields
from enum import Enum

import numpy as np

from ..components import DISCHARGE_MODES, HHV_H2_KWH_PER_KG, TANK_FLOOR_FRACTION, DeviceRatings, PvParams
from ..errors import DomainError
from ..profiles import PhevFleetConfig


class Scenario(str, Enum):
    FIXED = "fixed"  # unmanaged charging profile is a fixed load
    DEFERRABLE = "deferrable"  # shortfalls are pushed to later hours of the day

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise DomainError(f"unknown scenario {value!r}; use 'fixed' or 'deferrable'") from None


@dataclass(frozen=True)
class SystemSizing:
    n_pv: int = 0
    electrolyzer_kW: float = 0.0
    tank_kg: float = 0.0
    fuel_cell_kW: float = 0.0
    converter_kW: float = 0.0
    n_evse: int = 0

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if not np.isfinite(v) or v < 0:
                raise DomainError(f"{f.name} must be finite and >= 0, got {v}")
        for name in ("n_pv", "n_evse"):
            v = getattr(self, name)
            if v != int(v):
                raise DomainError(f"{name} must be an integer, got {v}")
            object.__setattr__(self, name, int(v))

    def as_vector(self):
        return np.array([getattr(self, f.name) for f in fields(self)], dtype=float)

    @classmethod
    def from_vector(cls, x):
        """Build from a 6-vector, rounding the PV and EVSE counts."""
        x = np.asarray(x, dtype=float)
        return cls(int(round(x[0])), float(x[1]), float(x[2]), float(x[3]), float(x[4]),
                   int(round(x[5])))


# Reference optima for the two scenarios, used in regression and order-of-magnitude checks.
PUBLISHED_FIXED_SIZING = SystemSizing(384, 49.73, 52.63, 48.31, 53.59, 34)
PUBLISHED_DEFERRABLE_SIZING = SystemSizing(318, 53.48, 58.39, 52.21, 53.97, 53)


@dataclass(frozen=True)
class SimulationConfig:
    """Physical parameters shared by every run; sizes come separately."""

    pv: PvParams = field(default_factory=PvParams)
    fleet: PhevFleetConfig = field(default_factory=PhevFleetConfig)
    eta_el: float = 0.75
    eta_fc: float = 0.50
    eta_conv: float = 0.90
    eta_sta: float = 0.90
    eta_storage: float = 0.95
    hhv_kWh_per_kg: float = HHV_H2_KWH_PER_KG
    tank_floor_fraction: float = TANK_FLOOR_FRACTION
    initial_tank_fraction: float = 0.5
    discharge_mode: str = "literal"

    def __post_init__(self):
        if not self.tank_floor_fraction <= self.initial_tank_fraction <= 1.0:
            raise DomainError("initial tank fraction must lie in [floor fraction, 1]")
        if self.discharge_mode not in DISCHARGE_MODES:
            raise DomainError(f"unknown discharge mode {self.discharge_mode!r}")
        if not 0.0 < self.eta_storage <= 1.0:
            raise DomainError("eta_storage must lie in (0, 1]")
        # validates the efficiencies
        self.ratings(SystemSizing())

    def ratings(self, sizing: SystemSizing) -> DeviceRatings:
        return DeviceRatings(sizing.electrolyzer_kW, sizing.fuel_cell_kW, sizing.converter_kW,
                             self.eta_el, self.eta_fc, self.eta_conv, self.eta_sta)


@dataclass(frozen=True)
class DispatchDecision:
    delta_p: float
    delta_p_prime: float | None
    store_request_kW: float
    shortage_request_kW: float
    station_allocation_kW: float


@dataclass(frozen=True, eq=False)
class StationDayState:
    """Station agent's view of one workday.

    ``pending_kW`` is the vehicle-side charging demand still scheduled for
    each hour of the day; the EVSE draw at the DC bus is that over eta_sta.
    Energy totals are DC-side kWh.
    """

    day: int
    pending_kW: np.ndarray
    requested_kWh: float = 0.0
    undelivered_kWh: float = 0.0
    delivered_kWh: float = 0.0
    unserved_kWh: float = 0.0
    residual_kWh: float = 0.0
    deferrals: int = 0
