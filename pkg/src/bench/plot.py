"""SVG figures of report series"""
import logging
import math
from collections import defaultdict
from pathlib import Path

import matplotlib
import numpy as np
from matplotlib.figure import Figure

from src.bench.scenarios import SCENARIOS
from src.exceptions.base import ReportIoError
from src.schemas.experiment import PlotKind, RunReport


logger = logging.getLogger(__name__)

# Stable ids and no timestamp so identical reports give identical files
SVG_RC = {"svg.hashsalt": "cdekf", "svg.fonttype": "none"}
SVG_METADATA = {"Date": None}

AXIS_LABELS = {
    PlotKind.ARMSE_VS_DELTA: ("Sampling period (s)", "ARMSE"),
    PlotKind.ARMSE_VS_DELTAILL: ("Ill-conditioning parameter", "ARMSE"),
    PlotKind.ARMSE_VS_LAMBDA: ("Stiffness parameter", "ARMSE"),
    PlotKind.CPU_VS_DELTA: ("Sampling period (s)", "Mean CPU time (s)"),
}


def tick_label(value: float, log_scale: bool) -> str:
    """'1e-15' for powers of ten on log axes, shortest float text otherwise"""
    if log_scale and value > 0:
        exponent = math.log10(value)
        if abs(exponent - round(exponent)) < 1e-9:
            return f"1e{int(round(exponent))}"
    return f"{value:g}"


def series_values(reports: list[RunReport], kind: PlotKind) -> dict[str, list[tuple[float, float]]]:
    """(param, y) per variant in report order; failures become NaN"""
    series: dict[str, list[tuple[float, float]]] = defaultdict(list)
    for report in reports:
        if kind is PlotKind.CPU_VS_DELTA:
            y = report.mean_cpu_s if report.mean_cpu_s is not None and not report.diverged else math.nan
        else:
            y = report.armse
        series[report.variant].append((report.param, y))
    return series


def emit_plot(reports: list[RunReport], kind: PlotKind, path: str | Path) -> None:
    """
    Draw one line per variant and save a standalone SVG.

    Lines carry the gid 'series-<variant>'. NaN values break a line; a variant
    with no finite value gets an empty line labelled '<variant> (diverged)'. The x axis is
    logarithmic when the reports come from a scenario with a log-spaced sweep.

    Raises:
        ValueError: No reports
        ReportIoError: The file cannot be written
    """
    if not reports:
        raise ValueError("Nothing to plot")
    kind = PlotKind(kind)
    log_x = any(SCENARIOS[r.scenario].log_sweep for r in reports)
    params = sorted({r.param for r in reports})

    with matplotlib.rc_context(SVG_RC):
        fig = Figure(figsize=(6.4, 4.8))
        ax = fig.subplots()
        try:
            for variant, points in series_values(reports, kind).items():
                x = np.array([p for p, _ in points])
                y = np.array([v for _, v in points])
                order = np.argsort(x)
                x, y = x[order], y[order]
                if not np.isfinite(y).any():
                    ax.plot([], [], marker="o", label=f"{variant} (diverged)", gid=f"series-{variant}")
                else:
                    ax.plot(x, y, marker="o", label=variant, gid=f"series-{variant}")

            if log_x:
                ax.set_xscale("log")
            if kind is not PlotKind.CPU_VS_DELTA and any(r.armse > 0 for r in reports):
                ax.set_yscale("log")
            ax.set_xticks(params)
            ax.set_xticklabels([tick_label(p, log_x) for p in params], rotation=45 if len(params) > 8 else 0)
            ax.minorticks_off()
            xlabel, ylabel = AXIS_LABELS[kind]
            ax.set_xlabel(xlabel)
            ax.set_ylabel(ylabel)
            ax.legend(fontsize="small")
            fig.tight_layout()
            fig.savefig(path, format="svg", metadata=SVG_METADATA)
        except OSError as e:
            raise ReportIoError(str(path), e.strerror or str(e)) from e
    logger.info(f"Wrote {kind.value} plot to {path}")
