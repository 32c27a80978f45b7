"""PNG figures written next to the CSV reports.

Every figure is also available as a CSV series; the images are a
convenience. Output is deterministic: the Agg backend with no timestamp or
version metadata in the PNG.
"""

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

STYLE = {
    "figure.figsize": (7.0, 3.2),
    "figure.dpi": 110,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "font.size": 9,
    "legend.frameon": False,
}
_PNG_META = {"Software": None}


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, format="png", metadata=_PNG_META)
    plt.close(fig)


def plot_annual_curve(values, path, ylabel, title):
    """Whole-year hourly series against the hour of the year."""
    values = np.asarray(values, dtype=float)
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        ax.plot(np.arange(values.size), values, lw=0.4, color="tab:blue")
        ax.set_xlim(0, values.size)
        ax.set_xlabel("hour of year")
        ax.set_ylabel(ylabel)
        ax.set_title(title)
        _save(fig, path)


def plot_convergence(traces, path):
    """Best cost per iteration; ``traces`` maps a label to a convergence array.

    The feasible incumbent is drawn where it exists, the penalized best elsewhere
    is left out so the y-range stays on the NPC scale.
    """
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        for label, trace in traces.items():
            trace = np.asarray(trace, dtype=float)
            feas = trace[:, 2]
            if np.all(np.isnan(feas)):
                ax.plot(trace[:, 0], trace[:, 1], lw=1.2, ls="--", label=f"{label} (infeasible)")
            else:
                ax.plot(trace[:, 0], feas, lw=1.2, label=label)
        ax.set_xlabel("iteration")
        ax.set_ylabel("total cost ($)")
        ax.legend()
        _save(fig, path)


def plot_dispatch(log, path, start_hour=0, hours=168):
    """Power flows and tank content over a window of the simulation."""
    stop = min(start_hour + hours, log.n_hours)
    t = np.arange(start_hour, stop)
    h = {k: np.asarray(v)[start_hour:stop] for k, v in log.hourly.items()}
    with plt.rc_context({**STYLE, "figure.figsize": (7.0, 5.0)}):
        fig, (ax1, ax2) = plt.subplots(2, 1, sharex=True)
        ax1.plot(t, h["p_pv"], lw=0.9, label="PV")
        ax1.plot(t, h["p_load"], lw=0.9, label="office load")
        ax1.plot(t, h["p_pv_sta"], lw=0.9, label="station")
        ax1.plot(t, h["p_fc_conv"], lw=0.9, label="fuel cell")
        ax1.plot(t, h["p_pv_el"], lw=0.9, label="electrolyzer")
        ax1.set_ylabel("kW")
        ax1.legend(ncol=5, fontsize=7, loc="upper right")
        ax2.plot(t, h["tank_energy"], color="tab:purple", lw=1.0)
        for y in (log.tank_floor, log.tank_capacity):
            if math.isfinite(y):
                ax2.axhline(y, color="grey", lw=0.6, ls=":")
        ax2.set_ylabel("tank (kWh)")
        ax2.set_xlabel("hour of year")
        _save(fig, path)
