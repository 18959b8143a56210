"""
Monte Carlo harness.

Each run simulates one truth trajectory and one measurement sequence, then feeds
the same data to every variant. Runs are independent and may execute in a
process pool; results are reduced in run-index order.
"""
import hashlib
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict

from src.bench.metrics import armse
from src.bench.plot import emit_plot
from src.bench.report import write_csv
from src.bench.scenarios import SCENARIOS
from src.exceptions.base import CdekfException
from src.filters.oracle import exact_kalman_filter
from src.filters.runner import FailureRecord, run_filter
from src.logging_config import timed
from src.odesolve.options import OdeOptions
from src.schemas.experiment import ExperimentConfig, RunReport
from src.sim.measurements import MeasurementRecord, stack_values, synthesize_measurements
from src.sim.random import run_seed
from src.sim.truth import Trajectory, simulate_truth


logger = logging.getLogger(__name__)

EXACT_KF = "exact-kf"


class VariantOutcome(BaseModel):
    """One variant on one run"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    variant: str
    truth: np.ndarray
    estimates: Optional[np.ndarray] = None
    failure: Optional[FailureRecord] = None
    cpu_s: float = 0.0
    checksum: str


def data_checksum(truth: Trajectory, measurements: list[MeasurementRecord]) -> str:
    """SHA-256 of the truth trajectory and measurement values"""
    digest = hashlib.sha256()
    digest.update(truth.times.tobytes())
    digest.update(truth.states.tobytes())
    digest.update(np.array([m.time for m in measurements]).tobytes())
    digest.update(stack_values(measurements).tobytes())
    return digest.hexdigest()


def simulate_run(config: ExperimentConfig, param: float, run_index: int) -> tuple[Trajectory, list[MeasurementRecord]]:
    """Truth and measurements of one Monte Carlo run"""
    spec = SCENARIOS[config.scenario]
    model = spec.build_model(param)
    seed = run_seed(config.base_seed, run_index)
    truth = simulate_truth(
        model,
        spec.truth_dt,
        spec.horizon,
        seed,
        sample_initial_state=config.sample_initial_state,
        refinements=spec.truth_refinements,
    )
    return truth, synthesize_measurements(truth, model, spec.sampling_period(param), seed)


def execute_run(config: ExperimentConfig, param: float, run_index: int) -> list[VariantOutcome]:
    """Every configured variant on the shared data of one run"""
    spec = SCENARIOS[config.scenario]
    model = spec.build_model(param)
    opts = OdeOptions.from_let(config.let_tol, config.max_step, spec.method)
    truth, measurements = simulate_run(config, param, run_index)
    checksum = data_checksum(truth, measurements)
    true_states = truth.at_times([m.time for m in measurements])

    outcomes = []
    for variant in config.variants:
        start = time.perf_counter()
        result = run_filter(variant, model, measurements, config.alpha, opts)
        cpu_s = time.perf_counter() - start

        if data_checksum(truth, measurements) != checksum:
            raise CdekfException(f"Run {run_index}: shared data changed while running {variant.value}")
        outcomes.append(VariantOutcome(
            variant=variant.value,
            truth=true_states,
            estimates=result.posterior_means() if result.completed else None,
            failure=result.failure,
            cpu_s=cpu_s,
            checksum=checksum,
        ))

    if spec.exact_reference:
        beliefs = exact_kalman_filter(model, measurements)
        outcomes.append(VariantOutcome(
            variant=EXACT_KF,
            truth=true_states,
            estimates=np.vstack([b.mean for b in beliefs[1:]]),
            checksum=checksum,
        ))
    return outcomes


def aggregate(config: ExperimentConfig, param: float, runs: list[list[VariantOutcome]]) -> list[RunReport]:
    """Reduce per-run outcomes, in run order, to one report per variant"""
    reports = []
    for column in zip(*runs):
        completed = [o for o in column if o.failure is None]
        failed = [o for o in column if o.failure is not None]
        value = math.nan
        if completed:
            value = armse([o.truth for o in completed], [o.estimates for o in completed])
            if not math.isfinite(value):
                value = math.nan

        first = min(failed, key=lambda o: o.failure.time) if failed else None
        reports.append(RunReport(
            scenario=config.scenario,
            param=param,
            variant=column[0].variant,
            armse=value,
            mean_cpu_s=float(np.mean([o.cpu_s for o in column])) if config.timing else None,
            runs=len(column),
            failed_runs=len(failed),
            first_failure_t=first.failure.time if first else None,
            first_failure_cause=first.failure.cause if first else None,
        ))
    return reports


def run_experiment(config: ExperimentConfig) -> list[RunReport]:
    """
    Run every sweep value and variant, then write the CSV (and plot) if requested.

    Raises:
        ReportIoError: Output files cannot be written
    """
    reports: list[RunReport] = []
    with timed(f"Experiment {config.scenario.value} ({config.runs} runs)", logger):
        for param in config.sweep:
            with timed(f"{SCENARIOS[config.scenario].param_name}={param:g}", logger):
                task = partial(execute_run, config, param)
                if config.workers > 1:
                    with ProcessPoolExecutor(max_workers=config.workers) as pool:
                        runs = list(pool.map(task, range(config.runs)))
                else:
                    runs = [task(i) for i in range(config.runs)]
            for report in aggregate(config, param, runs):
                if report.failed_runs:
                    logger.warning(
                        f"{report.variant} at {param:g}: {report.failed_runs}/{report.runs} runs diverged "
                        f"(first at t={report.first_failure_t:.4g}, {report.first_failure_cause})"
                    )
                reports.append(report)

    if config.output_path:
        write_csv(reports, config.output_path, timing=config.timing)
    if config.plot_path:
        emit_plot(reports, config.plot_kind, config.plot_path)
    return reports
