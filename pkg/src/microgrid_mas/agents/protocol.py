"""Five-agent message protocol that drives one simulation run.

Topology: design agent <-> control agent <-> {generation, load, station}
agents. Agents only learn about each other through :class:`AgentMessage`
values routed by :class:`MessageBus`; every hour follows the same lockstep
order: forecasts, dispatch decision, generation/station actions, reports.
"""

from dataclasses import dataclass, field
from enum import Enum
from types import MappingProxyType

import numpy as np

from ..components import TankState, pv_output
from ..errors import ContractError, LengthError
from ..profiles import HourlyTimeSeries
from .log import DEPARTURE_COLUMNS, SimulationLog
from .rules import (
    departure_index,
    dispatch_step,
    ga_store_surplus,
    ga_supply_shortage,
    new_day_state,
    sa_process_hour,
    sa_settle_departure,
    station_request,
)
from .station import station_input
from .types import Scenario, SimulationConfig, SystemSizing


class MessageKind(str, Enum):
    RUN_REQUEST = "RunRequest"
    RUN_RESULT = "RunResult"
    SIZES_ASSIGNED = "SizesAssigned"
    PV_FORECAST_REQUEST = "PvForecastRequest"
    PV_FORECAST_REPLY = "PvForecastReply"
    LOAD_FORECAST_REQUEST = "LoadForecastRequest"
    LOAD_FORECAST_REPLY = "LoadForecastReply"
    CHARGE_FORECAST_REQUEST = "ChargeForecastRequest"
    CHARGE_FORECAST_REPLY = "ChargeForecastReply"
    STORE_SURPLUS = "StoreSurplus"
    SUPPLY_SHORTAGE = "SupplyShortage"
    STATION_ALLOCATION = "StationAllocation"
    OPERATION_REPORT = "OperationReport"
    UNSERVED_REPORT = "UnservedReport"


DA, CA, GA, LA, SA = "DA", "CA", "GA", "LA", "SA"
LINKS = frozenset({(DA, CA), (CA, DA), (CA, GA), (GA, CA), (CA, LA), (LA, CA), (CA, SA), (SA, CA)})


@dataclass(frozen=True)
class AgentMessage:
    kind: MessageKind
    timestep: int
    sender: str
    recipient: str
    payload: MappingProxyType = field(default_factory=lambda: MappingProxyType({}))

    @classmethod
    def make(cls, kind, timestep, sender, recipient, **payload):
        return cls(kind, timestep, sender, recipient, MappingProxyType(payload))


class MessageBus:
    """Routes messages along the fixed topology; optionally keeps a trace."""

    def __init__(self, trace=False):
        self.agents = {}
        self.trace = [] if trace else None

    def register(self, agent):
        agent.bus = self
        self.agents[agent.name] = agent

    def send(self, msg: AgentMessage):
        if (msg.sender, msg.recipient) not in LINKS:
            raise ContractError(f"no channel {msg.sender} -> {msg.recipient}")
        if self.trace is not None:
            self.trace.append(msg)
        replies = self.agents[msg.recipient].handle(msg) or []
        if self.trace is not None:
            self.trace.extend(replies)
        return replies


class Agent:
    name = "?"
    bus = None

    def handle(self, msg):
        raise ContractError(f"{self.name} cannot handle {msg.kind.value}")

    def reply(self, msg, kind, **payload):
        return AgentMessage.make(kind, msg.timestep, self.name, msg.sender, **payload)


class GenerationAgent(Agent):
    """Owns the PV array, electrolyzer, tank and fuel cell."""

    name = GA

    def __init__(self, irradiance, cfg: SimulationConfig):
        self.irradiance = irradiance
        self.cfg = cfg
        self.sizing = None
        self.ratings = None
        self.tank = None

    def handle(self, msg):
        kind = msg.kind
        if kind is MessageKind.SIZES_ASSIGNED:
            cfg, sizing = self.cfg, msg.payload["sizing"]
            self.sizing = sizing
            self.ratings = cfg.ratings(sizing)
            tank = TankState(0.0, sizing.tank_kg, cfg.hhv_kWh_per_kg, cfg.tank_floor_fraction,
                             cfg.eta_storage, cfg.discharge_mode)
            self.tank = TankState(max(tank.floor_kWh, cfg.initial_tank_fraction * tank.capacity_kWh),
                                  sizing.tank_kg, cfg.hhv_kWh_per_kg, cfg.tank_floor_fraction,
                                  cfg.eta_storage, cfg.discharge_mode)
            return [self.reply(msg, MessageKind.OPERATION_REPORT, tank_energy=self.tank.energy_kWh,
                               tank_floor=self.tank.floor_kWh, tank_capacity=self.tank.capacity_kWh)]
        if kind is MessageKind.PV_FORECAST_REQUEST:
            g = float(self.irradiance[msg.timestep])
            return [self.reply(msg, MessageKind.PV_FORECAST_REPLY,
                               p_pv=pv_output(self.cfg.pv, self.sizing.n_pv, g))]
        if kind is MessageKind.STORE_SURPLUS:
            self.tank, flows = ga_store_surplus(self.tank, self.ratings, msg.payload["kW"])
            return [self.reply(msg, MessageKind.OPERATION_REPORT, tank_energy=self.tank.energy_kWh,
                               **flows._asdict())]
        if kind is MessageKind.SUPPLY_SHORTAGE:
            self.tank, flows, unmet = ga_supply_shortage(self.tank, self.ratings, msg.payload["kW"])
            return [self.reply(msg, MessageKind.OPERATION_REPORT, tank_energy=self.tank.energy_kWh,
                               unmet_kW=unmet, **flows._asdict())]
        return super().handle(msg)


class LoadAgent(Agent):
    """Simple reflex agent: reports the office demand of the next hour."""

    name = LA

    def __init__(self, load):
        self.load = load

    def handle(self, msg):
        if msg.kind is MessageKind.LOAD_FORECAST_REQUEST:
            return [self.reply(msg, MessageKind.LOAD_FORECAST_REPLY,
                               p_load=float(self.load[msg.timestep]))]
        return super().handle(msg)


class StationAgent(Agent):
    name = SA

    def __init__(self, station, scenario, cfg: SimulationConfig, n_hours):
        self.station = station
        self.scenario = scenario
        self.cfg = cfg
        self.n_hours = n_hours
        self.inputs = None
        self.n_evse = 0
        self.day = None

    def _day_state(self, t):
        d = t // 24
        if self.day is None or self.day.day != d:
            base = self.inputs.base_kW[24 * d:24 * d + 24]
            self.day = new_day_state(d, base, self.inputs.requested_kWh[d],
                                     self.inputs.undelivered_kWh[d])
        return self.day

    def _in_window(self, t):
        return bool(self.inputs.workdays[t // 24]) and t % 24 <= departure_index(self.cfg.fleet)

    def handle(self, msg):
        kind, t, fleet = msg.kind, msg.timestep, self.cfg.fleet
        if kind is MessageKind.SIZES_ASSIGNED:
            self.n_evse = msg.payload["sizing"].n_evse
            self.inputs = station_input(self.station, fleet, self.cfg.eta_sta, self.n_hours)
            self.day = None
            return []
        if kind is MessageKind.CHARGE_FORECAST_REQUEST:
            p_sta = 0.0
            if self._in_window(t):
                p_sta = station_request(self._day_state(t), t % 24, fleet, self.n_evse)
            return [self.reply(msg, MessageKind.CHARGE_FORECAST_REPLY, p_sta=p_sta)]
        if kind is MessageKind.STATION_ALLOCATION:
            if not self._in_window(t):
                return [self.reply(msg, MessageKind.OPERATION_REPORT, served_kW=0.0,
                                   requested_kW=0.0, deferred=False)]
            state = self._day_state(t)
            requested = station_request(state, t % 24, fleet, self.n_evse) / self.cfg.eta_sta
            self.day, served, deferred = sa_process_hour(
                state, t, msg.payload["kW"], fleet, self.n_evse, self.scenario, self.cfg.eta_sta)
            out = [self.reply(msg, MessageKind.OPERATION_REPORT, served_kW=served,
                              requested_kW=requested, deferred=deferred)]
            if t % 24 == departure_index(fleet):
                out.append(self.reply(msg, MessageKind.UNSERVED_REPORT, day=self.day.day,
                                      q_sta=sa_settle_departure(self.day, fleet),
                                      requested_kWh=self.day.requested_kWh,
                                      delivered_kWh=self.day.delivered_kWh))
            return out
        return super().handle(msg)


_COLUMNS = ("p_pv", "p_load", "p_sta_requested", "p_pv_sta", "p_pv_el", "p_el_tank", "p_tank_fc",
            "p_fc_conv", "p_dump", "tank_energy", "q_load", "p_load_served")


class ControlAgent(Agent):
    """Coordinates GA, LA and SA hour by hour and reports the run to the DA."""

    name = CA

    def __init__(self, n_hours, scenario, cfg: SimulationConfig):
        self.n_hours = n_hours
        self.scenario = scenario
        self.cfg = cfg

    def _ask(self, kind, t, to, **payload):
        return self.bus.send(AgentMessage.make(kind, t, self.name, to, **payload))

    def handle(self, msg):
        if msg.kind is not MessageKind.RUN_REQUEST:
            return super().handle(msg)
        sizing = msg.payload["sizing"]
        K = MessageKind
        (report,) = self._ask(K.SIZES_ASSIGNED, -1, GA, sizing=sizing)
        self._ask(K.SIZES_ASSIGNED, -1, SA, sizing=sizing)
        initial = report.payload["tank_energy"]
        tank_energy = initial
        ratings = self.cfg.ratings(sizing)
        eta_conv, conv_kW = ratings.eta_conv, ratings.converter_kW

        n = self.n_hours
        rec = {c: np.zeros(n) for c in _COLUMNS}
        departures = []
        for t in range(n):
            (pv,) = self._ask(K.PV_FORECAST_REQUEST, t, GA)
            (ld,) = self._ask(K.LOAD_FORECAST_REQUEST, t, LA)
            (st,) = self._ask(K.CHARGE_FORECAST_REQUEST, t, SA)
            p_pv, p_load, p_sta = pv.payload["p_pv"], ld.payload["p_load"], st.payload["p_sta"]

            # the converter rating caps the AC load that can be carried
            p_attempt = p_load if p_load <= conv_kW else conv_kW
            decision = dispatch_step(p_pv, p_attempt, p_sta, ratings)

            p_pv_el = p_el_tank = p_tank_fc = p_fc_conv = p_dump = 0.0
            served_load = p_attempt
            if decision.store_request_kW > 0:
                (op,) = self._ask(K.STORE_SURPLUS, t, GA, kW=decision.store_request_kW)
                p_pv_el, p_el_tank, p_dump = (op.payload[k] for k in ("p_pv_el", "p_el_tank", "p_dump"))
                tank_energy = op.payload["tank_energy"]
            elif decision.shortage_request_kW > 0:
                (op,) = self._ask(K.SUPPLY_SHORTAGE, t, GA, kW=decision.shortage_request_kW)
                p_tank_fc, p_fc_conv = op.payload["p_tank_fc"], op.payload["p_fc_conv"]
                tank_energy = op.payload["tank_energy"]
                if op.payload["unmet_kW"] > 0:
                    served_load = (p_pv + p_fc_conv) * eta_conv

            sa_replies = self._ask(K.STATION_ALLOCATION, t, SA, kW=decision.station_allocation_kW)
            served_sta = sa_replies[0].payload["served_kW"]
            # allocation the station could not use stays on the bus and is dumped
            p_dump += decision.station_allocation_kW - served_sta
            for r in sa_replies[1:]:
                departures.append((r.payload["day"], r.payload["q_sta"],
                                   r.payload["requested_kWh"], r.payload["delivered_kWh"]))

            row = (p_pv, p_load, sa_replies[0].payload["requested_kW"], served_sta, p_pv_el,
                   p_el_tank, p_tank_fc, p_fc_conv, p_dump, tank_energy, p_load - served_load,
                   served_load)
            for c, v in zip(_COLUMNS, row):
                rec[c][t] = v

        deps = np.array(departures, dtype=float).reshape(-1, len(DEPARTURE_COLUMNS))
        log = SimulationLog(rec, deps, initial, tank_energy, report.payload["tank_floor"],
                            report.payload["tank_capacity"], self.scenario.value,
                            meta={"sizing": sizing})
        return [self.reply(msg, MessageKind.RUN_RESULT, log=log)]


class DesignAgent(Agent):
    name = DA

    def request_run(self, sizing: SystemSizing) -> SimulationLog:
        (result,) = self.bus.send(AgentMessage.make(MessageKind.RUN_REQUEST, -1, DA, CA, sizing=sizing))
        return result.payload["log"]


def _as_array(series, name):
    values = series.values if isinstance(series, HourlyTimeSeries) else np.asarray(series, float)
    if values.ndim != 1:
        raise LengthError(f"{name} must be one-dimensional")
    return values


def build_mas(irradiance, office_load, station, scenario, cfg=None, trace=False):
    """Wire up the five agents on a bus; returns ``(design_agent, bus)``."""
    cfg = cfg or SimulationConfig()
    scenario = Scenario.parse(scenario)
    g = _as_array(irradiance, "irradiance")
    load = _as_array(office_load, "office load")
    if g.size != load.size:
        raise LengthError(f"irradiance has {g.size} hours, office load has {load.size}")
    if g.size == 0 or g.size % 24:
        raise LengthError(f"horizon must be a positive whole number of days, got {g.size} hours")
    bus = MessageBus(trace=trace)
    design = DesignAgent()
    for agent in (design, ControlAgent(g.size, scenario, cfg), GenerationAgent(g, cfg), LoadAgent(load),
                  StationAgent(station, scenario, cfg, g.size)):
        bus.register(agent)
    return design, bus


def run_simulation(sizing: SystemSizing, irradiance, office_load, station, scenario,
                   cfg: SimulationConfig = None) -> SimulationLog:
    """Simulate the microgrid hour by hour through the agent protocol.

    ``station`` is either a :class:`DailyArrivalSchedule`, from which the
    unmanaged profile is derived, or a fixed vehicle-side charging profile of
    the same length as the other series. The EVSE count caps the station
    draw at ``n_evse * psi / eta_sta`` in every hour.
    """
    design, _ = build_mas(irradiance, office_load, station, scenario, cfg)
    return design.request_run(sizing)
