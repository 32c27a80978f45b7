"""Net present cost of the microgrid components."""

from dataclasses import dataclass, field, replace

from .errors import DomainError

SIZING_FIELDS = ("n_pv", "electrolyzer_kW", "tank_kg", "fuel_cell_kW", "converter_kW", "n_evse")


@dataclass(frozen=True)
class ComponentSpec:
    name: str
    unit: str  # "per_count" | "per_kW" | "per_kg"
    capital: float
    replacement: float
    maintenance: float  # $/unit/yr
    lifetime_yr: float
    efficiency: float = 1.0

    def __post_init__(self):
        if min(self.capital, self.replacement, self.maintenance) < 0:
            raise DomainError(f"{self.name}: costs must be >= 0")
        if self.lifetime_yr <= 0:
            raise DomainError(f"{self.name}: lifetime must be > 0")


def _default_specs():
    return {
        "n_pv": ComponentSpec("PV", "per_count", 2000.0, 1800.0, 0.0, 20.0, 0.154),
        "electrolyzer_kW": ComponentSpec("Electrolyzer", "per_kW", 1500.0, 1000.0, 15.0, 20.0, 0.75),
        "tank_kg": ComponentSpec("Hydrogen tank", "per_kg", 500.0, 450.0, 5.0, 20.0, 0.95),
        "fuel_cell_kW": ComponentSpec("Fuel cell", "per_kW", 2000.0, 1500.0, 100.0, 5.0, 0.50),
        "converter_kW": ComponentSpec("DC/AC converter", "per_kW", 700.0, 650.0, 7.0, 15.0, 0.90),
        "n_evse": ComponentSpec("EVSE", "per_count", 2000.0, 1800.0, 20.0, 20.0, 0.90),
    }


@dataclass(frozen=True)
class ComponentCatalog:
    """Cost data for every sizing dimension, keyed by the ``SystemSizing`` field name."""

    specs: dict = field(default_factory=_default_specs)
    interest_rate: float = 0.06
    project_years: float = 20.0

    def __post_init__(self):
        missing = [k for k in SIZING_FIELDS if k not in self.specs]
        if missing:
            raise DomainError(f"catalog is missing specs for {missing}")

    def with_spec(self, key, **changes):
        specs = dict(self.specs)
        specs[key] = replace(specs[key], **changes)
        return replace(self, specs=specs)


def single_payment_present_worth(lifetime_yr, ir, project_years):
    """Discount-factor sum over replacements strictly inside the project horizon.

    A unit reaching end of life exactly at the horizon is not replaced.
    """
    if lifetime_yr <= 0:
        raise DomainError(f"lifetime must be > 0, got {lifetime_yr}")
    if project_years <= 0:
        raise DomainError(f"project horizon must be > 0, got {project_years}")
    k = 0.0
    n = 1
    while n * lifetime_yr < project_years:
        k += (1.0 + ir) ** (-n * lifetime_yr)
        n += 1
    return k


def present_worth_annuity(ir, project_years):
    """Present value of $1 paid at the end of every project year."""
    if project_years <= 0:
        raise DomainError(f"project horizon must be > 0, got {project_years}")
    if ir == 0:
        return float(project_years)
    if ir < 0:
        raise DomainError(f"interest rate must be >= 0, got {ir}")
    return (1.0 - (1.0 + ir) ** (-project_years)) / ir


def component_npc(spec: ComponentSpec, size, ir=0.06, project_years=20.0):
    if size < 0:
        raise DomainError(f"{spec.name}: size must be >= 0, got {size}")
    k = single_payment_present_worth(spec.lifetime_yr, ir, project_years)
    pwa = present_worth_annuity(ir, project_years)
    return size * (spec.capital + spec.replacement * k + spec.maintenance * pwa)


def unit_npcs(catalog: ComponentCatalog):
    """NPC of one unit of each component, in sizing-field order."""
    return tuple(
        component_npc(catalog.specs[k], 1.0, catalog.interest_rate, catalog.project_years)
        for k in SIZING_FIELDS
    )


def npc_breakdown(sizing, catalog: ComponentCatalog):
    return {
        k: component_npc(catalog.specs[k], getattr(sizing, k), catalog.interest_rate,
                         catalog.project_years)
        for k in SIZING_FIELDS
    }


def total_npc(sizing, catalog: ComponentCatalog):
    """Sum of the six component NPCs for ``sizing``."""
    return sum(npc_breakdown(sizing, catalog).values())
