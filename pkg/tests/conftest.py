import numpy as np
import pytest

from microgrid_mas.agents import SimulationConfig
from microgrid_mas.profiles import (
    PhevFleetConfig,
    synthesize_irradiance,
    synthesize_office_load,
    synthesize_phev_fleet,
)

# acceptance tests record one line each here; printed at the end of the run
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])


@pytest.fixture
def record_criterion():
    def record(number, passed, detail):
        ACCEPTANCE_LINES[number] = f"criterion {number}: {'PASS' if passed else 'FAIL'} - {detail}"
        print(ACCEPTANCE_LINES[number])
    return record


@pytest.fixture(scope="session")
def year_profiles():
    """Seed-1 synthetic year: irradiance, office load, PHEV schedule, config."""
    cfg = SimulationConfig(fleet=PhevFleetConfig(rng_seed=1))
    return (synthesize_irradiance(1), synthesize_office_load(60.0, 1),
            synthesize_phev_fleet(cfg.fleet), cfg)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def two_day_context(scenario, start_day=136, seed=1, station=True):
    """48-hour evaluation context cut from a synthetic year (two sunny workdays by default)."""
    from microgrid_mas.optimizer import EvaluationContext
    from microgrid_mas.profiles import DailyArrivalSchedule

    cfg = SimulationConfig(fleet=PhevFleetConfig(rng_seed=seed, fleet_size=50 if station else 0))
    sl = slice(24 * start_day, 24 * start_day + 48)
    g = synthesize_irradiance(seed).values[sl]
    load = synthesize_office_load(60.0, seed).values[sl]
    full = synthesize_phev_fleet(cfg.fleet)
    days = slice(start_day, start_day + 2)
    sch = DailyArrivalSchedule(full.arrivals[days], full.demands_kWh[days], full.workdays[days])
    return EvaluationContext(g, load, sch, scenario, sim_cfg=cfg)
