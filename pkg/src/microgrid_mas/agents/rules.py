"""Per-hour decision rules of the control, generation and station agents.

These are pure functions; the agents in :mod:`.protocol` wrap them in the
message exchange. The fast kernel mirrors the same arithmetic.
"""

from dataclasses import replace
from typing import NamedTuple

import numpy as np

from ..components import DeviceRatings, TankState, electrolyzer_output, fuel_cell_output, tank_step
from ..errors import ContractError, DomainError
from ..profiles import PhevFleetConfig
from .types import DispatchDecision, Scenario, StationDayState


class StoreFlows(NamedTuple):
    p_pv_el: float
    p_el_tank: float
    p_dump: float


class SupplyFlows(NamedTuple):
    p_tank_fc: float
    p_fc_conv: float


def dispatch_step(p_pv, p_load, p_sta_req, ratings: DeviceRatings) -> DispatchDecision:
    """Control-agent balance for one hour.

    ``p_load`` is the AC load the converter will be asked to carry and
    ``p_sta_req`` the vehicle-side station demand. The station only ever
    receives PV surplus left after the office load.
    """
    if p_pv < 0 or p_load < 0 or p_sta_req < 0:
        raise DomainError("dispatch inputs must be >= 0")
    load_dc = p_load / ratings.eta_conv
    sta_draw = p_sta_req / ratings.eta_sta
    delta = p_pv - load_dc - sta_draw
    if delta > 0:
        return DispatchDecision(delta, None, delta, 0.0, sta_draw)
    if delta == 0:
        return DispatchDecision(delta, None, 0.0, 0.0, sta_draw)
    delta_prime = p_pv - load_dc
    if delta_prime > 0:
        return DispatchDecision(delta, delta_prime, 0.0, 0.0, delta_prime)
    if delta_prime == 0:
        return DispatchDecision(delta, delta_prime, 0.0, 0.0, 0.0)
    return DispatchDecision(delta, delta_prime, 0.0, -delta_prime, 0.0)


def ga_store_surplus(tank: TankState, ratings: DeviceRatings, surplus, dt_h=1.0):
    """Route surplus PV through the electrolyzer into the tank; the rest is dumped."""
    if surplus < 0:
        raise DomainError("surplus must be >= 0")
    if surplus == 0:
        return tank, StoreFlows(0.0, 0.0, 0.0)
    p_pv_el = min(surplus, ratings.electrolyzer_kW)
    p_el_tank = electrolyzer_output(p_pv_el, ratings)
    if p_el_tank <= 0:
        return tank, StoreFlows(0.0, 0.0, surplus)
    step = tank_step(tank, p_el_tank, 0.0, dt_h)
    if step.overflow_kWh > 0:
        # hydrogen that did not fit goes back to the dump at electrolyzer input
        p_el_tank = p_el_tank - step.overflow_kWh / dt_h
        p_pv_el = p_el_tank / ratings.eta_el
    return step.state, StoreFlows(p_pv_el, p_el_tank, surplus - p_pv_el)


def ga_supply_shortage(tank: TankState, ratings: DeviceRatings, shortage_kW, dt_h=1.0):
    """Cover a DC-bus shortage from the fuel cell as far as rating and fuel allow.

    Returns ``(tank, SupplyFlows, unmet_kW)``.
    """
    if shortage_kW < 0:
        raise DomainError("shortage must be >= 0")
    if shortage_kW == 0:
        return tank, SupplyFlows(0.0, 0.0), 0.0
    feed = min(shortage_kW / ratings.eta_fc, ratings.fuel_cell_kW / ratings.eta_fc,
               tank.max_withdrawal_kW(dt_h))
    if feed <= 0:
        return tank, SupplyFlows(0.0, 0.0), shortage_kW
    p_fc_conv = fuel_cell_output(feed, ratings)
    step = tank_step(tank, 0.0, feed, dt_h)
    unmet = shortage_kW - p_fc_conv
    return step.state, SupplyFlows(feed, p_fc_conv), (unmet if unmet > 0 else 0.0)


def departure_index(cfg: PhevFleetConfig) -> int:
    """Hour-of-day index of the last charging hour; it ends at T2."""
    return int(cfg.departure_hour_T2) - 1


def station_request(state: StationDayState, hour_of_day, cfg: PhevFleetConfig, n_evse):
    """Vehicle-side demand the station asks for this hour, capped by the plugs."""
    return min(float(state.pending_kW[hour_of_day]), n_evse * cfg.charge_rate_psi)


def sa_process_hour(day_state: StationDayState, t, allocation_kW, cfg: PhevFleetConfig, n_evse,
                    scenario=Scenario.DEFERRABLE, eta_sta=0.9):
    """Serve the station for step ``t`` and carry any shortfall forward.

    Returns ``(state, served_kW, deferral_applied)`` with ``served_kW`` the
    DC-side power drawn. In the deferrable scenario the unmet part of this
    hour (including demand above the plug limit) is spread evenly over the
    remaining hours up to the departure hour; at the departure hour it is
    held as the day's residual. In the fixed scenario it is unserved at once.
    """
    if allocation_kW < 0:
        raise DomainError("allocation must be >= 0")
    h = t % 24
    h_dep = departure_index(cfg)
    if t // 24 != day_state.day or h > h_dep:
        raise ContractError(f"step {t} is outside day {day_state.day}'s charging window")
    scenario = Scenario.parse(scenario)

    p_sta = float(day_state.pending_kW[h])
    requested = station_request(day_state, h, cfg, n_evse) / eta_sta
    served = requested if allocation_kW >= requested else allocation_kW
    delivered = day_state.delivered_kWh + served
    # DC-side demand of this hour that was not met
    left = p_sta / eta_sta - served
    if left <= 0:
        return replace(day_state, delivered_kWh=delivered), served, False

    if scenario is Scenario.FIXED:
        return replace(day_state, delivered_kWh=delivered,
                       unserved_kWh=day_state.unserved_kWh + left), served, False
    if h == h_dep:
        return replace(day_state, delivered_kWh=delivered,
                       residual_kWh=day_state.residual_kWh + left), served, False

    pending = day_state.pending_kW.copy()
    pending[h + 1:h_dep + 1] += left * eta_sta / (h_dep - h)
    return replace(day_state, pending_kW=pending, delivered_kWh=delivered,
                   deferrals=day_state.deferrals + 1), served, True


def sa_settle_departure(day_state: StationDayState, cfg: PhevFleetConfig = None):
    """Uncharged PHEV energy at departure, DC-side kWh.

    Adds the departure-hour residual, any energy unserved earlier in the day
    (fixed scenario) and energy the plugs could not deliver before departure.
    The station agent starts the next workday from a fresh state.
    """
    q = day_state.residual_kWh + day_state.unserved_kWh + day_state.undelivered_kWh
    return q if q > 0 else 0.0


def new_day_state(day, base_kW, requested_kWh, undelivered_kWh):
    return StationDayState(day, np.array(base_kW, dtype=float), requested_kWh, undelivered_kWh)
