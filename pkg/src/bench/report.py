"""CSV report"""
import csv
import logging
import math
from pathlib import Path
from typing import Optional

from src.exceptions.base import ReportIoError
from src.schemas.experiment import RunReport


logger = logging.getLogger(__name__)

CSV_HEADER = ["scenario", "param", "variant", "armse", "mean_cpu_s", "failed_runs", "first_failure_t"]


def format_value(value: Optional[float]) -> str:
    """Shortest round-trip repr; NaN as 'NaN', missing as empty"""
    if value is None:
        return ""
    if math.isnan(value):
        return "NaN"
    return repr(float(value))


def report_row(report: RunReport, timing: bool = True) -> list[str]:
    return [
        report.scenario.value,
        format_value(report.param),
        report.variant,
        format_value(report.armse),
        format_value(report.mean_cpu_s) if timing else "",
        str(report.failed_runs),
        format_value(report.first_failure_t),
    ]


def write_csv(reports: list[RunReport], path: str | Path, timing: bool = True) -> None:
    """
    Write one row per report.

    Raises:
        ReportIoError: The file cannot be written
    """
    try:
        with open(path, "w", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(CSV_HEADER)
            for report in reports:
                writer.writerow(report_row(report, timing))
    except OSError as e:
        raise ReportIoError(str(path), e.strerror or str(e)) from e
    logger.info(f"Wrote {len(reports)} report rows to {path}")
