"""Stateless device models for the generation side of the microgrid.

All powers are in kW and all energies in kWh. A time step is one hour unless
``dt_h`` says otherwise.
"""

from dataclasses import dataclass, replace
from typing import NamedTuple

from .errors import ContractError, DomainError

HHV_H2_KWH_PER_KG = 39.7
TANK_FLOOR_FRACTION = 0.05

# How the fuel-cell withdrawal is charged against the tank.
#   "literal": E -= p_tank_fc * eta_storage * dt
#   "divide":  E -= p_tank_fc / eta_storage * dt
DISCHARGE_MODES = ("literal", "divide")


@dataclass(frozen=True)
class PvParams:
    eta_g: float = 0.154
    area_m2: float = 1.9
    rated_unit_kW: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.eta_g < 1.0:
            raise DomainError(f"eta_g must lie in (0, 1), got {self.eta_g}")
        if self.area_m2 <= 0.0:
            raise DomainError(f"module area must be positive, got {self.area_m2}")


@dataclass(frozen=True)
class DeviceRatings:
    electrolyzer_kW: float = 0.0
    fuel_cell_kW: float = 0.0
    converter_kW: float = 0.0
    eta_el: float = 0.75
    eta_fc: float = 0.50
    eta_conv: float = 0.90
    eta_sta: float = 0.90

    def __post_init__(self):
        for name in ("electrolyzer_kW", "fuel_cell_kW", "converter_kW"):
            if getattr(self, name) < 0.0:
                raise DomainError(f"{name} must be >= 0")
        for name in ("eta_el", "eta_fc", "eta_conv", "eta_sta"):
            eta = getattr(self, name)
            if not 0.0 < eta <= 1.0:
                raise DomainError(f"{name} must lie in (0, 1], got {eta}")


@dataclass(frozen=True)
class TankState:
    """Hydrogen tank content, passed by value between steps."""

    energy_kWh: float
    rated_mass_kg: float
    hhv_kWh_per_kg: float = HHV_H2_KWH_PER_KG
    floor_fraction: float = TANK_FLOOR_FRACTION
    eta_storage: float = 0.95
    discharge_mode: str = "literal"

    def __post_init__(self):
        if self.rated_mass_kg < 0.0:
            raise DomainError("tank mass must be >= 0")
        if self.discharge_mode not in DISCHARGE_MODES:
            raise DomainError(f"unknown discharge mode {self.discharge_mode!r}")

    @property
    def capacity_kWh(self) -> float:
        return self.rated_mass_kg * self.hhv_kWh_per_kg

    @property
    def floor_kWh(self) -> float:
        return self.floor_fraction * self.capacity_kWh

    @property
    def mass_kg(self) -> float:
        """Stored hydrogen mass."""
        return self.energy_kWh / self.hhv_kWh_per_kg

    def max_withdrawal_kW(self, dt_h: float = 1.0) -> float:
        """Largest fuel-cell feed the tank can give this step without going below the floor."""
        room = self.energy_kWh - self.floor_kWh
        if room <= 0.0:
            return 0.0
        if self.discharge_mode == "literal":
            return room / (self.eta_storage * dt_h)
        return room * self.eta_storage / dt_h

    def max_intake_kW(self, dt_h: float = 1.0) -> float:
        """Largest electrolyzer output the tank can accept this step."""
        return max(0.0, self.capacity_kWh - self.energy_kWh) / dt_h


class TankStep(NamedTuple):
    state: TankState
    overflow_kWh: float  # hydrogen energy discarded above capacity
    deficit_kWh: float  # energy missing below the floor


def pv_output(params: PvParams, n_pv: float, g_t: float) -> float:
    """PV array output in kW for ``n_pv`` modules under irradiance ``g_t`` (W/m2)."""
    if n_pv < 0 or g_t < 0:
        raise DomainError(f"n_pv and g_t must be >= 0, got {n_pv}, {g_t}")
    return params.eta_g * n_pv * params.area_m2 * g_t / 1000.0


def fuel_cell_output(p_tank_fc: float, ratings: DeviceRatings) -> float:
    if p_tank_fc < 0:
        raise DomainError(f"fuel-cell feed must be >= 0, got {p_tank_fc}")
    return p_tank_fc * ratings.eta_fc


def electrolyzer_output(p_pv_el: float, ratings: DeviceRatings) -> float:
    if p_pv_el < 0:
        raise DomainError(f"electrolyzer feed must be >= 0, got {p_pv_el}")
    if p_pv_el > ratings.electrolyzer_kW:
        raise ContractError(
            f"electrolyzer feed {p_pv_el} kW exceeds rating {ratings.electrolyzer_kW} kW"
        )
    return p_pv_el * ratings.eta_el


def tank_step(state: TankState, p_el_tank: float, p_tank_fc: float, dt_h: float = 1.0) -> TankStep:
    """Advance the tank by one step and clamp to [floor, capacity].

    Charging and discharging in the same step is refused.
    """
    if p_el_tank < 0 or p_tank_fc < 0:
        raise DomainError("tank flows must be >= 0")
    if p_el_tank > 0 and p_tank_fc > 0:
        raise ContractError("tank cannot charge and discharge in the same step")
    if p_el_tank == 0 and p_tank_fc == 0:
        return TankStep(state, 0.0, 0.0)

    if state.discharge_mode == "literal":
        drawn = p_tank_fc * state.eta_storage * dt_h
    else:
        drawn = p_tank_fc / state.eta_storage * dt_h
    energy = state.energy_kWh + p_el_tank * dt_h - drawn

    overflow = deficit = 0.0
    cap, floor = state.capacity_kWh, state.floor_kWh
    if energy > cap:
        overflow, energy = energy - cap, cap
    elif energy < floor:
        deficit, energy = floor - energy, floor
    return TankStep(replace(state, energy_kWh=energy), overflow, deficit)


def tank_bounds(rated_mass_kg: float, hhv: float = HHV_H2_KWH_PER_KG,
                floor_fraction: float = TANK_FLOOR_FRACTION) -> tuple[float, float]:
    """Return ``(floor_kWh, capacity_kWh)`` for a tank of the given rated mass."""
    if rated_mass_kg < 0:
        raise DomainError(f"tank mass must be >= 0, got {rated_mass_kg}")
    capacity = rated_mass_kg * hhv
    return floor_fraction * capacity, capacity
