"""Command-line front end: simulate, optimize, compare.

Exit codes: 0 success (including an infeasible optimum, which is reported
with a warning), 1 internal error, 2 bad input.
"""

import argparse
import csv
import sys
from dataclasses import fields
from pathlib import Path

from . import __version__
from .agents import Scenario, SystemSizing, run_simulation, station_input
from .config import RunConfig, dump_config, load_config, load_profiles
from .economics import SIZING_FIELDS, npc_breakdown, total_npc
from .errors import ConfigError, MicrogridError
from .optimizer import EvaluationContext, pso_optimize
from .reliability import check_feasibility

TABLE_LABELS = ("PV", "Electrolyzer (kW)", "Hydrogen tank (kg)", "Fuel cell (kW)",
                "DC/AC converter (kW)", "EVSE")
SCENARIO_TITLES = {Scenario.FIXED: "Scenario 1 (fixed charging)",
                   Scenario.DEFERRABLE: "Scenario 2 (deferrable charging)"}
_SIZING_FLAGS = (("pv", "n_pv", int), ("electrolyzer_kw", "electrolyzer_kW", float),
                 ("tank_kg", "tank_kg", float), ("fc_kw", "fuel_cell_kW", float),
                 ("conv_kw", "converter_kW", float), ("evse", "n_evse", int))


def _fmt_size(dim, value):
    return str(int(value)) if dim in ("n_pv", "n_evse") else f"{value:.2f}"


def _write_rows(path, header, rows):
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def _write_series(path, column, values):
    _write_rows(path, ("hour", column), ((i, repr(float(v))) for i, v in enumerate(values)))


def _emit(text, out_dir, name):
    print(text)
    (out_dir / name).write_text(text + "\n", encoding="utf-8")


def _prepare(args):
    rc = load_config(args.config)
    rc = rc.with_overrides(scenario=args.scenario, seed=args.seed, output_dir=args.out)
    profiles = load_profiles(rc)
    out = Path(rc.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return rc, profiles, out


def _write_profile_report(rc, profiles, out):
    from .plotting import plot_annual_curve

    g, load, station = profiles
    inputs = station_input(station, rc.sim.fleet, rc.sim.eta_sta, load.values.size)
    _write_series(out / "office_load.csv", "load_kW", load.values)
    _write_series(out / "station_load.csv", "charging_kW", inputs.base_kW)
    plot_annual_curve(load.values, out / "office_load.png", "load (kW)", "Office load")
    plot_annual_curve(inputs.base_kW, out / "station_load.png", "charging (kW)",
                      "Unmanaged station demand")


def _sizing_from_args(rc: RunConfig, args):
    base = rc.sizing or SystemSizing()
    vals = {f.name: getattr(base, f.name) for f in fields(base)}
    given = False
    for flag, dim, _ in _SIZING_FLAGS:
        v = getattr(args, flag)
        if v is not None:
            vals[dim] = v
            given = True
    if rc.sizing is None and not given:
        raise ConfigError("no sizing given; add a [sizing] section or sizing flags", "sizing")
    try:
        return SystemSizing(**vals)
    except MicrogridError as exc:
        raise ConfigError(str(exc), "sizing") from None


def _summary_lines(rc, sizing, log, report, npc):
    lines = [f"scenario: {rc.scenario.value}"]
    lines += [f"{label}: {_fmt_size(d, getattr(sizing, d))}" for label, d in zip(TABLE_LABELS, SIZING_FIELDS)]
    lines += [
        f"NPC ($): {npc:.2f}",
        f"ELF_load: {report.elf_load:.6f}",
        f"ELF_sta: {report.elf_sta:.6f}",
        f"tank end - initial (kWh): {report.tank_end_minus_initial_kWh:.4f}",
        f"dump energy (kWh): {log.dump_energy():.4f}",
        f"feasible: {'yes' if report.feasible else 'no'}",
    ]
    return lines


def cmd_simulate(args):
    from .plotting import plot_dispatch

    rc, (g, load, station), out = _prepare(args)
    sizing = _sizing_from_args(rc, args)
    log = run_simulation(sizing, g, load, station, rc.scenario, rc.sim)
    report = check_feasibility(log)
    npc = total_npc(sizing, rc.catalog)
    npc_parts = npc_breakdown(sizing, rc.catalog)
    log.write_csv(out / "hourly.csv", out / "departures.csv")
    _write_rows(out / "npc_breakdown.csv", ("component", "npc"),
                ((lbl, repr(float(npc_parts[d]))) for lbl, d in zip(TABLE_LABELS, SIZING_FIELDS)))
    _write_profile_report(rc, (g, load, station), out)
    plot_dispatch(log, out / "dispatch.png", start_hour=24 * 170)
    _emit("\n".join(_summary_lines(rc, sizing, log, report, npc)), out, "summary.txt")
    return 0


def _optimize_one(rc, ctx, scenario, out):
    result = pso_optimize(rc.pso, ctx.with_scenario(scenario))
    tag = scenario.value
    result.write_convergence_csv(out / f"convergence_{tag}.csv")
    s = result.best_sizing
    _write_rows(out / f"sizing_{tag}.csv", TABLE_LABELS + ("Total cost ($)",),
                [[_fmt_size(d, getattr(s, d)) for d in SIZING_FIELDS] + [f"{result.best_cost:.2f}"]])
    scen_rc = rc.with_overrides(scenario=scenario)
    (out / f"optimum_{tag}.ini").write_text(dump_config(scen_rc, s), encoding="utf-8")
    return result


def _result_lines(scenario, result):
    rep = result.constraint_report
    title = SCENARIO_TITLES[scenario]
    lines = [title, "-" * len(title)]
    s = result.best_sizing
    lines += [f"{label}: {_fmt_size(d, getattr(s, d))}" for label, d in zip(TABLE_LABELS, SIZING_FIELDS)]
    lines += [f"Total cost ($): {result.best_cost:.2f}",
              f"ELF_load: {rep.elf_load:.6f}  ELF_sta: {rep.elf_sta:.6f}  "
              f"tank end - initial (kWh): {rep.tank_end_minus_initial_kWh:.4f}",
              f"evaluations: {result.evaluations}",
              f"verdict: {'feasible' if result.feasible else 'infeasible'}"]
    return lines


def _warn_infeasible(scenario, result):
    if not result.feasible:
        print(f"warning: no feasible sizing found for {scenario.value}; "
              "reporting the least-penalized candidate", file=sys.stderr)


def _context(rc, profiles):
    g, load, station = profiles
    return EvaluationContext(g, load, station, rc.scenario, rc.catalog, rc.sim,
                             penalty_weight=rc.pso.penalty_weight)


def cmd_optimize(args):
    from .plotting import plot_convergence

    rc, profiles, out = _prepare(args)
    _write_profile_report(rc, profiles, out)
    result = _optimize_one(rc, _context(rc, profiles), rc.scenario, out)
    plot_convergence({SCENARIO_TITLES[rc.scenario]: result.convergence}, out / "convergence.png")
    _emit("\n".join(_result_lines(rc.scenario, result)), out, "summary.txt")
    _warn_infeasible(rc.scenario, result)
    return 0


def cmd_compare(args):
    from .plotting import plot_convergence

    rc, profiles, out = _prepare(args)
    _write_profile_report(rc, profiles, out)
    ctx = _context(rc, profiles)  # one realization, shared by both scenarios
    results = {s: _optimize_one(rc, ctx, s, out) for s in (Scenario.FIXED, Scenario.DEFERRABLE)}
    r1, r2 = results[Scenario.FIXED], results[Scenario.DEFERRABLE]

    rows = []
    for label, d in zip(TABLE_LABELS, SIZING_FIELDS):
        a, b = getattr(r1.best_sizing, d), getattr(r2.best_sizing, d)
        rows.append([label, _fmt_size(d, a), _fmt_size(d, b), _fmt_size(d, b - a) if d in ("n_pv", "n_evse")
                     else f"{b - a:.2f}"])
    rows.append(["Total cost ($)", f"{r1.best_cost:.2f}", f"{r2.best_cost:.2f}",
                 f"{r2.best_cost - r1.best_cost:.2f}"])
    rows.append(["verdict", "feasible" if r1.feasible else "infeasible",
                 "feasible" if r2.feasible else "infeasible", ""])
    header = ("component", SCENARIO_TITLES[Scenario.FIXED], SCENARIO_TITLES[Scenario.DEFERRABLE], "delta")
    _write_rows(out / "compare.csv", header, rows)
    plot_convergence({SCENARIO_TITLES[s]: r.convergence for s, r in results.items()}, out / "convergence.png")

    width = max(len(r[0]) for r in rows)
    text = [f"{'':{width}}  {'Scenario 1':>14}  {'Scenario 2':>14}  {'delta':>14}"]
    text += [f"{r[0]:{width}}  {r[1]:>14}  {r[2]:>14}  {r[3]:>14}" for r in rows]
    delta = r2.best_cost - r1.best_cost
    pct = 100.0 * delta / r1.best_cost if r1.best_cost else float("nan")
    text.append(f"cost delta (Scenario 2 - Scenario 1): {delta:.2f} $ ({pct:+.2f} %)")
    _emit("\n".join(text), out, "summary.txt")
    for s, r in results.items():
        _warn_infeasible(s, r)
    return 0


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="INI run configuration (defaults apply when omitted)")
    common.add_argument("--scenario", choices=[s.value for s in Scenario])
    common.add_argument("--seed", type=int)
    common.add_argument("--out", help="output directory")

    parser = argparse.ArgumentParser(prog="microgrid-mas", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", parents=[common], help="run one year for a given sizing")
    for flag, _, conv in _SIZING_FLAGS:
        sim.add_argument("--" + flag.replace("_", "-"), dest=flag, type=conv)
    sim.set_defaults(func=cmd_simulate)
    sub.add_parser("optimize", parents=[common], help="size the microgrid with PSO").set_defaults(func=cmd_optimize)
    sub.add_parser("compare", parents=[common],
                   help="optimize both scenarios on shared profiles").set_defaults(func=cmd_compare)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (MicrogridError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
