import math

import pytest

from microgrid_mas.agents import PUBLISHED_FIXED_SIZING, SystemSizing
from microgrid_mas.economics import (
    ComponentCatalog,
    ComponentSpec,
    component_npc,
    npc_breakdown,
    present_worth_annuity,
    single_payment_present_worth,
    total_npc,
)
from microgrid_mas.errors import DomainError

REL = 1e-6


def discount_sum(lifetime, ir, horizon):
    """Independent oracle: add 1/(1+ir)^t for every replacement year t < horizon."""
    total, t = 0.0, lifetime
    while t < horizon - 1e-12:
        total += 1.0 / (1.0 + ir) ** t
        t += lifetime
    return total


def annuity_sum(ir, horizon):
    """Oracle: discount each year's payment separately."""
    return sum(1.0 / (1.0 + ir) ** y for y in range(1, int(horizon) + 1))


class TestSinglePaymentPresentWorth:
    def test_no_replacement(self):
        assert single_payment_present_worth(20, 0.06, 20) == 0.0

    def test_five_year_life(self):
        # 1.06^-5 + 1.06^-10 + 1.06^-15 = 0.747258 + 0.558395 + 0.417265
        k = single_payment_present_worth(5, 0.06, 20)
        assert k == pytest.approx(discount_sum(5, 0.06, 20), rel=REL)
        assert k == pytest.approx(1.7230, abs=1e-4)

    def test_fifteen_year_life(self):
        assert single_payment_present_worth(15, 0.06, 20) == pytest.approx(1.06 ** -15, rel=REL)
        assert single_payment_present_worth(15, 0.06, 20) == pytest.approx(0.4173, abs=1e-4)

    @pytest.mark.parametrize("life,horizon", [(3, 20), (7, 25), (4, 20), (1, 5)])
    def test_matches_oracle(self, life, horizon):
        assert single_payment_present_worth(life, 0.08, horizon) == pytest.approx(
            discount_sum(life, 0.08, horizon), rel=1e-12)


class TestAnnuity:
    def test_twenty_years(self):
        assert present_worth_annuity(0.06, 20) == pytest.approx(annuity_sum(0.06, 20), rel=REL)
        assert present_worth_annuity(0.06, 20) == pytest.approx(11.4699, abs=1e-4)

    def test_one_year(self):
        assert present_worth_annuity(0.06, 1) == pytest.approx(1 / 1.06, rel=REL)

    def test_zero_rate_limit(self):
        assert present_worth_annuity(0.0, 20) == 20
        assert present_worth_annuity(1e-9, 20) == pytest.approx(20.0, rel=1e-6)


class TestComponentNpc:
    def test_pv_reference_count(self):
        spec = ComponentCatalog().specs["n_pv"]
        assert component_npc(spec, 384) == pytest.approx(768_000.0, rel=REL)

    def test_fuel_cell_one_kw(self):
        spec = ComponentCatalog().specs["fuel_cell_kW"]
        oracle = 2000 + 1500 * discount_sum(5, 0.06, 20) + 100 * annuity_sum(0.06, 20)
        assert component_npc(spec, 1.0) == pytest.approx(oracle, rel=REL)
        # with K rounded to 1.7230 the value is 5731.49; exact K gives 5731.37
        assert component_npc(spec, 1.0) == pytest.approx(5731.369, abs=1e-3)

    @pytest.mark.parametrize("key", ["n_pv", "electrolyzer_kW", "tank_kg", "fuel_cell_kW",
                                     "converter_kW", "n_evse"])
    def test_zero_size(self, key):
        assert component_npc(ComponentCatalog().specs[key], 0) == 0.0

    def test_negative_cost_rejected(self):
        with pytest.raises(DomainError):
            ComponentSpec("x", "per_kW", -1.0, 0.0, 0.0, 5.0)


class TestTotalNpc:
    def test_zero(self):
        assert total_npc(SystemSizing(), ComponentCatalog()) == 0.0

    def test_table_one_spreadsheet(self):
        # one line per component: N * (CC + RC*K + MC*PWA)
        pwa = annuity_sum(0.06, 20)
        rows = [
            384 * (2000 + 1800 * 0.0 + 0 * pwa),
            49.73 * (1500 + 1000 * 0.0 + 15 * pwa),
            52.63 * (500 + 450 * 0.0 + 5 * pwa),
            48.31 * (2000 + 1500 * discount_sum(5, 0.06, 20) + 100 * pwa),
            53.59 * (700 + 650 * discount_sum(15, 0.06, 20) + 7 * pwa),
            34 * (2000 + 1800 * 0.0 + 20 * pwa),
        ]
        total = total_npc(PUBLISHED_FIXED_SIZING, ComponentCatalog())
        assert total == pytest.approx(math.fsum(rows), rel=1e-9)
        # pinned after the first computation
        assert total == pytest.approx(1_289_516.80, abs=0.01)

    def test_linear(self):
        s = PUBLISHED_FIXED_SIZING
        double = SystemSizing(2 * s.n_pv, 2 * s.electrolyzer_kW, 2 * s.tank_kg, 2 * s.fuel_cell_kW,
                              2 * s.converter_kW, 2 * s.n_evse)
        assert total_npc(double, ComponentCatalog()) == pytest.approx(
            2 * total_npc(s, ComponentCatalog()), rel=1e-12)

    def test_breakdown_sums(self):
        parts = npc_breakdown(PUBLISHED_FIXED_SIZING, ComponentCatalog())
        assert sum(parts.values()) == pytest.approx(total_npc(PUBLISHED_FIXED_SIZING, ComponentCatalog()))
