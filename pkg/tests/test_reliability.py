import numpy as np
import pytest

from microgrid_mas.agents import SimulationLog
from microgrid_mas.errors import LengthError
from microgrid_mas.reliability import check_feasibility, elf_load, elf_station


def make_log(p_load, q_load, q_sta=None, requested=None, initial=10.0, final=10.0):
    n = len(p_load)
    hourly = {"p_pv": np.zeros(n), "p_load": np.asarray(p_load, float),
              "q_load": np.asarray(q_load, float)}
    q_sta = np.zeros(0) if q_sta is None else np.asarray(q_sta, float)
    requested = np.ones_like(q_sta) if requested is None else np.asarray(requested, float)
    deps = np.column_stack([np.arange(q_sta.size), q_sta, requested, requested - q_sta])
    return SimulationLog(hourly, deps.reshape(-1, 4), initial, final)


YEAR = 8760


class TestElfLoad:
    def test_fully_served(self):
        assert elf_load(make_log(np.full(YEAR, 5.0), np.zeros(YEAR))) == 0.0

    def test_blackout(self):
        p = np.full(YEAR, 5.0)
        assert elf_load(make_log(p, p)) == pytest.approx(1.0)

    def test_one_hour_shed(self):
        p = np.full(YEAR, 5.0)
        q = np.zeros(YEAR)
        q[100] = 5.0
        assert elf_load(make_log(p, q)) == pytest.approx(1 / 8760, rel=1e-6)
        assert elf_load(make_log(p, q)) == pytest.approx(1.1416e-4, rel=1e-4)

    def test_zero_demand_hours_count_as_zero(self):
        p = np.zeros(YEAR)
        p[0] = 2.0
        q = np.zeros(YEAR)
        q[0] = 1.0
        # (1/8760) * 0.5
        assert elf_load(make_log(p, q)) == pytest.approx(0.5 / 8760, rel=1e-6)


class TestElfStation:
    def test_all_served(self):
        assert elf_station(make_log([1.0], [0.0], q_sta=np.zeros(261))) == 0.0

    def test_half_unserved(self):
        log = make_log([1.0], [0.0], q_sta=np.full(261, 4.0), requested=np.full(261, 8.0))
        assert elf_station(log) == pytest.approx(0.5, rel=1e-6)

    def test_one_day_unserved(self):
        q = np.zeros(261)
        q[17] = 1.0
        assert elf_station(make_log([1.0], [0.0], q_sta=q)) == pytest.approx(1 / 261, rel=1e-6)
        assert elf_station(make_log([1.0], [0.0], q_sta=q)) == pytest.approx(3.831e-3, rel=1e-3)

    def test_record_count_checked(self):
        with pytest.raises(LengthError):
            elf_station(make_log([1.0], [0.0], q_sta=np.zeros(260)), workdays=261)


class TestFeasibility:
    def test_zero_loss(self):
        assert check_feasibility(make_log(np.ones(24), np.zeros(24), initial=5.0, final=6.0)).feasible

    def test_elf_load_violation(self):
        p = np.ones(100)
        q = np.zeros(100)
        q[:2] = 1.0  # elf_load = 0.02
        rep = check_feasibility(make_log(p, q))
        assert not rep.feasible
        assert rep.violations[0] == pytest.approx(0.01)
        assert rep.normalized_violations()[0] == pytest.approx(1.0)

    def test_tank_equal_is_feasible(self):
        assert check_feasibility(make_log(np.ones(24), np.zeros(24), initial=7.0, final=7.0)).feasible

    def test_tank_deficit(self):
        rep = check_feasibility(make_log(np.ones(24), np.zeros(24), initial=10.0, final=7.5))
        assert not rep.feasible
        assert rep.violations[2] == pytest.approx(2.5)
        assert rep.normalized_violations()[2] == pytest.approx(0.25)

    def test_station_limit_inclusive(self):
        log = make_log([1.0], [0.0], q_sta=np.full(10, 1.0), requested=np.full(10, 10.0))
        assert check_feasibility(log).feasible  # elf_sta = 0.1 exactly
