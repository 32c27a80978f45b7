"""Particle swarm search over the six component sizes."""

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .agents import Scenario, SimulationConfig, SystemSizing, run_simulation, simulate_fast, station_input
from .economics import ComponentCatalog, unit_npcs
from .errors import DomainError
from .reliability import ConstraintReport, check_feasibility

DEFAULT_BOUNDS = ((0.0, 1000.0), (0.0, 200.0), (0.0, 200.0), (0.0, 200.0), (0.0, 200.0), (0.0, 100.0))
INTEGER_DIMS = (0, 5)
CONVERGENCE_COLUMNS = ("iteration", "best_penalized_cost", "best_feasible_cost")


@dataclass(frozen=True)
class PsoConfig:
    swarm_size: int = 50
    max_iterations: int = 100
    inertia: float = 0.7
    c1: float = 1.5
    c2: float = 1.5
    velocity_clamp: float = 0.2
    bounds: tuple = DEFAULT_BOUNDS
    penalty_weight: float = 1e7
    rng_seed: int = 0

    def __post_init__(self):
        if self.swarm_size < 2:
            raise DomainError("swarm_size must be >= 2")
        if self.max_iterations < 0:
            raise DomainError("max_iterations must be >= 0")
        b = np.asarray(self.bounds, dtype=float)
        if b.shape != (6, 2) or np.any(b[:, 0] > b[:, 1]) or np.any(b[:, 0] < 0):
            raise DomainError("bounds must be six [lo, hi] pairs with 0 <= lo <= hi")
        object.__setattr__(self, "bounds", tuple(tuple(map(float, r)) for r in b))


class EvaluationContext:
    """Everything needed to score a candidate sizing.

    Station inputs are built once and shared by all evaluations. ``engine`` selects the compiled kernel ("fast") or the
    full message protocol ("protocol"); both give identical results.
    """

    def __init__(self, irradiance, office_load, station, scenario, catalog=None, sim_cfg=None,
                 penalty_weight=1e7, engine="fast"):
        self.irradiance = np.ascontiguousarray(getattr(irradiance, "values", irradiance), dtype=float)
        self.office_load = np.ascontiguousarray(getattr(office_load, "values", office_load), dtype=float)
        self.station = station
        self.scenario = Scenario.parse(scenario)
        self.catalog = catalog or ComponentCatalog()
        self.sim_cfg = sim_cfg or SimulationConfig()
        self.penalty_weight = penalty_weight
        if engine not in ("fast", "protocol"):
            raise DomainError(f"unknown engine {engine!r}")
        self.engine = engine
        self.unit_costs = np.array(unit_npcs(self.catalog))
        self._inputs = None

    @property
    def n_hours(self):
        return self.irradiance.size

    def station_inputs(self):
        if self._inputs is None:
            self._inputs = station_input(self.station, self.sim_cfg.fleet, self.sim_cfg.eta_sta,
                                         self.n_hours)
        return self._inputs

    def simulate(self, sizing):
        if self.engine == "protocol":
            return run_simulation(sizing, self.irradiance, self.office_load, self.station,
                                  self.scenario, self.sim_cfg)
        return simulate_fast(sizing, self.irradiance, self.office_load, self.station, self.scenario,
                             self.sim_cfg, inputs=self.station_inputs())

    def npc(self, sizing):
        # same summation order as economics.total_npc
        total = 0.0
        for unit, size in zip(self.unit_costs, sizing.as_vector()):
            total += size * unit
        return total

    def with_scenario(self, scenario):
        other = EvaluationContext.__new__(EvaluationContext)
        other.__dict__.update(self.__dict__)
        other.scenario = Scenario.parse(scenario)
        return other


def penalized_cost(raw_npc, report: ConstraintReport, penalty_weight):
    if report.feasible:
        return raw_npc
    return raw_npc + penalty_weight * sum(report.normalized_violations())


def evaluate_candidate(x, ctx: EvaluationContext):
    """Score a position; PV and EVSE counts are rounded to integers first.

    Returns ``(penalized_cost, raw_npc, report)``.
    """
    sizing = SystemSizing.from_vector(np.clip(np.asarray(x, dtype=float), 0.0, None))
    log = ctx.simulate(sizing)
    report = check_feasibility(log)
    raw = ctx.npc(sizing)
    return penalized_cost(raw, report, ctx.penalty_weight), raw, report


@dataclass
class OptimizationResult:
    best_sizing: SystemSizing
    best_cost: float
    penalized_cost: float
    constraint_report: ConstraintReport
    convergence: np.ndarray  # rows of CONVERGENCE_COLUMNS
    evaluations: int
    scenario: str = ""
    config: PsoConfig = None
    history: list = field(default_factory=list, repr=False)

    @property
    def feasible(self):
        return self.constraint_report.feasible

    def write_convergence_csv(self, path):
        with Path(path).open("w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(CONVERGENCE_COLUMNS)
            for it, pen, feas in self.convergence:
                w.writerow([int(it), repr(float(pen)), "" if math.isnan(feas) else repr(float(feas))])


def _round_integers(x):
    x = x.copy()
    x[..., list(INTEGER_DIMS)] = np.round(x[..., list(INTEGER_DIMS)])
    return x


def pso_optimize(cfg: PsoConfig, ctx: EvaluationContext, executor=None, keep_history=False):
    """Global-best PSO minimizing penalized NPC.

    The swarm follows penalized cost. Separately, the cheapest feasible
    candidate ever evaluated is kept and returned; only if none was feasible
    is the best penalized candidate returned (flagged infeasible).
    Evaluations within an iteration may go through ``executor.map``; results
    are reduced in particle order so the outcome does not depend on it.
    """
    rng = np.random.default_rng(cfg.rng_seed)
    bounds = np.asarray(cfg.bounds)
    lo, hi = bounds[:, 0], bounds[:, 1]
    span = hi - lo
    vmax = cfg.velocity_clamp * span
    n, dims = cfg.swarm_size, len(lo)
    mapper = executor.map if executor is not None else map

    def evaluate_all(positions):
        return list(mapper(evaluate_candidate, positions, [ctx] * len(positions)))

    x = lo + rng.random((n, dims)) * span
    v = rng.uniform(-vmax, vmax, (n, dims))

    pbest_x = x.copy()
    pbest_f = np.full(n, np.inf)
    pbest_feas = np.zeros(n, dtype=bool)
    g_x, g_f, g_feas = None, np.inf, False
    g_eval = None  # (rounded position, penalized, raw, report)
    inc = None  # best feasible: (rounded position, raw, report)
    history = []
    evaluations = 0
    trace = []

    for it in range(cfg.max_iterations + 1):
        if it > 0:
            r1 = rng.random((n, dims))
            r2 = rng.random((n, dims))
            v = cfg.inertia * v + cfg.c1 * r1 * (pbest_x - x) + cfg.c2 * r2 * (g_x - x)
            v = np.clip(v, -vmax, vmax)
            x = np.clip(x + v, lo, hi)
        results = evaluate_all(list(x))
        evaluations += n
        for i, (pen, raw, report) in enumerate(results):
            feas = report.feasible
            if keep_history:
                history.append((it, i, _round_integers(x[i]), pen, raw, feas))
            if pen < pbest_f[i] or (pen == pbest_f[i] and feas and not pbest_feas[i]):
                pbest_x[i], pbest_f[i], pbest_feas[i] = x[i], pen, feas
            if pen < g_f or (pen == g_f and feas and not g_feas):
                g_x, g_f, g_feas = x[i].copy(), pen, feas
                g_eval = (_round_integers(x[i]), pen, raw, report)
            if feas and (inc is None or raw < inc[1]):
                inc = (_round_integers(x[i]), raw, report)
        trace.append((it, g_f, inc[1] if inc is not None else math.nan))

    if inc is not None:
        pos, raw, report = inc
        pen = raw
    else:
        pos, pen, raw, report = g_eval
    return OptimizationResult(SystemSizing.from_vector(pos), raw, pen, report, np.array(trace),
                              evaluations, ctx.scenario.value, cfg, history)


def grid_search(ctx: EvaluationContext, bounds, levels=5):
    """Exhaustive search over an evenly spaced grid in the bounds box.

    Returns ``(best_penalized, best_position)``; used as the reference
    optimum for small problems.
    """
    axes = [np.linspace(lo, hi, levels) for lo, hi in bounds]
    mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, len(axes))
    best_f, best_x = np.inf, None
    for p in mesh:
        f = evaluate_candidate(p, ctx)[0]
        if f < best_f:
            best_f, best_x = f, p
    return best_f, best_x
