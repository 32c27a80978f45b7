"""Compiled single-loop version of the agent protocol, used in the optimizer.

Every floating-point operation follows the same order as the message
protocol in :mod:`.protocol`, so both produce bit-identical logs; the test
suite checks this. Keep the two in step when changing either.
"""

import numpy as np
from numba import njit

from .log import DEPARTURE_COLUMNS, SimulationLog
from .protocol import _COLUMNS, _as_array
from .station import StationInput, station_input
from .types import Scenario, SimulationConfig, SystemSizing


@njit(cache=True)
def _simulate(g, load, base_kW, day_req, day_undel, workdays, deferrable,
              n_pv, el_kW, tank_kg, fc_kW, conv_kW, n_evse,
              eta_g, area, eta_el, eta_fc, eta_conv, eta_sta, eta_storage,
              hhv, floor_frac, init_frac, literal, psi, h_dep):
    n = g.size
    out = np.zeros((12, n))
    n_work = 0
    for d in range(workdays.size):
        if workdays[d]:
            n_work += 1
    deps = np.zeros((n_work, 4))

    capacity = tank_kg * hhv
    floor = floor_frac * capacity
    energy = init_frac * capacity
    if floor > energy:
        energy = floor
    initial = energy
    cap_v = n_evse * psi

    pending = np.zeros(24)
    delivered = 0.0
    unserved = 0.0
    residual = 0.0
    k = 0
    for t in range(n):
        d = t // 24
        h = t % 24
        p_pv = eta_g * n_pv * area * g[t] / 1000.0
        p_load = load[t]
        in_window = workdays[d] and h <= h_dep
        if in_window and h == 0:
            for j in range(24):
                pending[j] = base_kW[24 * d + j]
            delivered = 0.0
            unserved = 0.0
            residual = 0.0
        p_sta = 0.0
        if in_window:
            p_sta = pending[h]
            if cap_v < p_sta:
                p_sta = cap_v

        p_att = p_load if p_load <= conv_kW else conv_kW
        load_dc = p_att / eta_conv
        sta_draw = p_sta / eta_sta
        delta = p_pv - load_dc - sta_draw
        store = 0.0
        shortage = 0.0
        alloc = 0.0
        if delta > 0:
            store = delta
            alloc = sta_draw
        elif delta == 0:
            alloc = sta_draw
        else:
            delta_p = p_pv - load_dc
            if delta_p > 0:
                alloc = delta_p
            elif delta_p < 0:
                shortage = -delta_p

        p_pv_el = 0.0
        p_el_tank = 0.0
        p_tank_fc = 0.0
        p_fc_conv = 0.0
        p_dump = 0.0
        served_load = p_att
        if store > 0:
            p_pv_el = store if store <= el_kW else el_kW
            p_el_tank = p_pv_el * eta_el
            if p_el_tank <= 0:
                p_pv_el = 0.0
                p_el_tank = 0.0
                p_dump = store
            else:
                e_new = energy + p_el_tank * 1.0 - 0.0
                overflow = 0.0
                if e_new > capacity:
                    overflow = e_new - capacity
                    e_new = capacity
                elif e_new < floor:
                    e_new = floor
                energy = e_new
                if overflow > 0:
                    p_el_tank = p_el_tank - overflow / 1.0
                    p_pv_el = p_el_tank / eta_el
                p_dump = store - p_pv_el
        elif shortage > 0:
            room = energy - floor
            avail = 0.0
            if room > 0:
                if literal:
                    avail = room / (eta_storage * 1.0)
                else:
                    avail = room * eta_storage / 1.0
            feed = shortage / eta_fc
            lim = fc_kW / eta_fc
            if lim < feed:
                feed = lim
            if avail < feed:
                feed = avail
            unmet = shortage
            if feed > 0:
                p_tank_fc = feed
                p_fc_conv = feed * eta_fc
                if literal:
                    drawn = feed * eta_storage * 1.0
                else:
                    drawn = feed / eta_storage * 1.0
                e_new = energy + 0.0 * 1.0 - drawn
                if e_new > capacity:
                    e_new = capacity
                elif e_new < floor:
                    e_new = floor
                energy = e_new
                unmet = shortage - p_fc_conv
            if unmet > 0:
                served_load = (p_pv + p_fc_conv) * eta_conv

        served_sta = 0.0
        requested = 0.0
        if in_window:
            requested = p_sta / eta_sta
            served_sta = requested if alloc >= requested else alloc
            delivered = delivered + served_sta
            left = pending[h] / eta_sta - served_sta
            if left > 0:
                if not deferrable:
                    unserved = unserved + left
                elif h == h_dep:
                    residual = residual + left
                else:
                    add = left * eta_sta / (h_dep - h)
                    for j in range(h + 1, h_dep + 1):
                        pending[j] += add
            if h == h_dep:
                q = residual + unserved + day_undel[d]
                deps[k, 0] = d
                deps[k, 1] = q if q > 0 else 0.0
                deps[k, 2] = day_req[d]
                deps[k, 3] = delivered
                k += 1
        p_dump += alloc - served_sta

        out[0, t] = p_pv
        out[1, t] = p_load
        out[2, t] = requested
        out[3, t] = served_sta
        out[4, t] = p_pv_el
        out[5, t] = p_el_tank
        out[6, t] = p_tank_fc
        out[7, t] = p_fc_conv
        out[8, t] = p_dump
        out[9, t] = energy
        out[10, t] = p_load - served_load
        out[11, t] = served_load
    return out, deps[:k], initial, energy, floor, capacity


def simulate_fast(sizing: SystemSizing, irradiance, office_load, station, scenario,
                  cfg: SimulationConfig = None, inputs: StationInput = None) -> SimulationLog:
    """Same contract as :func:`run_simulation`, without the message exchange.

    ``inputs`` lets a caller reuse station inputs already built.
    """
    cfg = cfg or SimulationConfig()
    scenario = Scenario.parse(scenario)
    g = np.ascontiguousarray(_as_array(irradiance, "irradiance"), dtype=np.float64)
    load = np.ascontiguousarray(_as_array(office_load, "office load"), dtype=np.float64)
    if inputs is None:
        inputs = station_input(station, cfg.fleet, cfg.eta_sta, g.size)
    out, deps, initial, final, floor, capacity = _simulate(
        g, load, inputs.base_kW, inputs.requested_kWh, inputs.undelivered_kWh,
        inputs.workdays, scenario is Scenario.DEFERRABLE,
        float(sizing.n_pv), sizing.electrolyzer_kW, sizing.tank_kg, sizing.fuel_cell_kW,
        sizing.converter_kW, float(sizing.n_evse),
        cfg.pv.eta_g, cfg.pv.area_m2, cfg.eta_el, cfg.eta_fc, cfg.eta_conv, cfg.eta_sta,
        cfg.eta_storage, cfg.hhv_kWh_per_kg, cfg.tank_floor_fraction, cfg.initial_tank_fraction,
        cfg.discharge_mode == "literal", cfg.fleet.charge_rate_psi,
        int(cfg.fleet.departure_hour_T2) - 1)
    hourly = {c: out[i] for i, c in enumerate(_COLUMNS)}
    return SimulationLog(hourly, deps.reshape(-1, len(DEPARTURE_COLUMNS)), initial, final, floor,
                         capacity, scenario.value, meta={"sizing": sizing})
