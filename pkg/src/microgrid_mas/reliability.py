"""Equivalent loss factors and the design feasibility test."""

from dataclasses import dataclass

import numpy as np

from .errors import LengthError

ELF_LOAD_MAX = 0.01
ELF_STA_MAX = 0.1


@dataclass(frozen=True)
class ConstraintReport:
    elf_load: float
    elf_sta: float
    tank_end_minus_initial_kWh: float
    feasible: bool
    violations: tuple  # (elf_load excess, elf_sta excess, tank deficit in kWh)
    tank_initial_kWh: float = 0.0

    def normalized_violations(self):
        """Violations relative to their limits; the tank deficit relative to the initial content."""
        tank_scale = self.tank_initial_kWh if self.tank_initial_kWh > 0 else 1.0
        v = self.violations
        return (v[0] / ELF_LOAD_MAX, v[1] / ELF_STA_MAX, v[2] / tank_scale)


def loss_ratio_mean(unserved, demand, n):
    """``(1/n) * sum(unserved/demand)`` with zero-demand entries counted as 0."""
    unserved = np.asarray(unserved, dtype=float)
    demand = np.asarray(demand, dtype=float)
    ratio = np.divide(unserved, demand, out=np.zeros_like(demand), where=demand > 0)
    return float(np.sum(ratio) / n) if n else 0.0


def elf_load(log):
    """Mean hourly fraction of office load shed."""
    return loss_ratio_mean(log.q_load, log.p_load, log.n_hours)


def elf_station(log, workdays=None):
    """Mean per-workday fraction of the requested charging energy left undelivered."""
    deps = log.departures
    if workdays is None:
        workdays = len(deps)
    if len(deps) != workdays:
        raise LengthError(f"log has {len(deps)} departure records, expected {workdays}")
    return loss_ratio_mean(deps[:, 1], deps[:, 2], workdays)


def check_feasibility(log, workdays=None) -> ConstraintReport:
    el = elf_load(log)
    es = elf_station(log, workdays)
    tank_delta = log.final_tank_energy - log.initial_tank_energy
    violations = (max(0.0, el - ELF_LOAD_MAX), max(0.0, es - ELF_STA_MAX), max(0.0, -tank_delta))
    feasible = el <= ELF_LOAD_MAX and es <= ELF_STA_MAX and tank_delta >= 0
    return ConstraintReport(el, es, tank_delta, feasible, violations, log.initial_tank_energy)
