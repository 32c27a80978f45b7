import pytest

from microgrid_mas.components import (
    DeviceRatings,
    PvParams,
    TankState,
    electrolyzer_output,
    fuel_cell_output,
    pv_output,
    tank_bounds,
    tank_step,
)
from microgrid_mas.errors import ContractError, DomainError

REL = 1e-6


class TestPvOutput:
    def test_single_module_full_sun(self):
        # 0.154 * 1 * 1.9 m2 * 1000 W/m2 = 292.6 W
        assert pv_output(PvParams(), 1, 1000.0) == pytest.approx(0.2926, rel=REL)

    def test_table_one_count(self):
        # 384 * 0.2926
        assert pv_output(PvParams(), 384, 1000.0) == pytest.approx(112.3584, rel=REL)

    @pytest.mark.parametrize("n", [0, 1, 384, 1000])
    def test_dark_hour(self, n):
        assert pv_output(PvParams(), n, 0.0) == 0.0

    def test_negative_irradiance_rejected(self):
        with pytest.raises(DomainError):
            pv_output(PvParams(), 1, -1.0)

    def test_bad_efficiency(self):
        with pytest.raises(DomainError):
            PvParams(eta_g=1.5)


class TestFuelCell:
    def test_half_efficiency(self):
        assert fuel_cell_output(10.0, DeviceRatings()) == pytest.approx(5.0, rel=REL)

    def test_zero(self):
        assert fuel_cell_output(0.0, DeviceRatings()) == 0.0

    def test_table_one_rating(self):
        # 96.62 kW of hydrogen feed gives the 48.31 kW rating
        assert fuel_cell_output(96.62, DeviceRatings()) == pytest.approx(48.31, rel=REL)


class TestElectrolyzer:
    def test_hand_product(self):
        assert electrolyzer_output(10.0, DeviceRatings(electrolyzer_kW=50)) == pytest.approx(7.5, rel=REL)

    def test_zero(self):
        assert electrolyzer_output(0.0, DeviceRatings(electrolyzer_kW=50)) == 0.0

    def test_table_one_rating(self):
        # 49.73 * 0.75
        out = electrolyzer_output(49.73, DeviceRatings(electrolyzer_kW=49.73))
        assert out == pytest.approx(37.2975, rel=REL)

    def test_above_rating(self):
        with pytest.raises(ContractError):
            electrolyzer_output(60.0, DeviceRatings(electrolyzer_kW=50))


class TestTank:
    def big(self, energy):
        return TankState(energy, rated_mass_kg=10.0)  # 397 kWh capacity, floor 19.85

    def test_charge(self):
        assert tank_step(self.big(100.0), 10.0, 0.0).state.energy_kWh == pytest.approx(110.0, rel=REL)

    def test_discharge_literal(self):
        # 100 - 10 * 0.95 * 1
        assert tank_step(self.big(100.0), 0.0, 10.0).state.energy_kWh == pytest.approx(90.5, rel=REL)

    def test_discharge_divide_mode(self):
        s = TankState(100.0, 10.0, discharge_mode="divide")
        assert tank_step(s, 0.0, 9.5).state.energy_kWh == pytest.approx(90.0, rel=REL)

    def test_no_flows_identity(self):
        s = self.big(123.4)
        step = tank_step(s, 0.0, 0.0)
        assert step.state == s and step.overflow_kWh == 0 and step.deficit_kWh == 0

    def test_simultaneous_flows_refused(self):
        with pytest.raises(ContractError):
            tank_step(self.big(100.0), 1.0, 1.0)

    def test_overflow_clamped(self):
        s = TankState(39.0, 1.0)
        step = tank_step(s, 5.0, 0.0)
        assert step.state.energy_kWh == pytest.approx(39.7)
        assert step.overflow_kWh == pytest.approx(4.3)

    def test_floor_clamped(self):
        s = TankState(3.0, 1.0)  # floor 1.985
        step = tank_step(s, 0.0, 10.0)
        assert step.state.energy_kWh == pytest.approx(1.985)
        assert step.deficit_kWh == pytest.approx(1.985 - (3.0 - 9.5))

    def test_max_withdrawal_reaches_floor(self):
        s = TankState(20.0, 1.0)
        feed = s.max_withdrawal_kW()
        assert tank_step(s, 0.0, feed).state.energy_kWh == pytest.approx(s.floor_kWh, rel=1e-12)

    def test_mass(self):
        assert TankState(39.7, 1.0).mass_kg == pytest.approx(1.0)


class TestTankBounds:
    def test_one_kg(self):
        assert tank_bounds(1.0) == pytest.approx((1.985, 39.7), rel=REL)

    def test_zero(self):
        assert tank_bounds(0.0) == (0.0, 0.0)

    def test_table_one_mass(self):
        # 52.63 * 39.7 = 2089.411; 5 % of that = 104.47055
        assert tank_bounds(52.63) == pytest.approx((104.47055, 2089.411), rel=REL)

    def test_negative(self):
        with pytest.raises(DomainError):
            tank_bounds(-1.0)
