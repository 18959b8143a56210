"""Command-line entry point"""
import argparse
import logging
from typing import Optional, Sequence

from dotenv import dotenv_values
from pydantic import ValidationError

from src.bench.harness import run_experiment
from src.config import settings
from src.exceptions.base import ConfigError
from src.exceptions.handlers import EXIT_OK, handle_exception
from src.filters.variant import FilterVariant
from src.logging_config import configure_logging
from src.models.registry import MODEL_FACTORIES, build_model
from src.schemas.experiment import ExperimentConfig, PlotKind, Scenario
from src.sim.truth import simulate_truth


logger = logging.getLogger(__name__)

# CLI flag -> ExperimentConfig field
CONFIG_KEYS = {
    "scenario": "scenario",
    "filters": "variants",
    "alpha": "alpha",
    "tol": "let_tol",
    "max_step": "max_step",
    "runs": "runs",
    "seed": "base_seed",
    "out": "output_path",
    "plot": "plot_path",
    "plot_kind": "plot_kind",
    "workers": "workers",
    "sweep": "sweep",
    "no_timing": "timing",
    "sample_x0": "sample_initial_state",
}

TRUE_WORDS = {"1", "true", "yes", "on"}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=settings.app_name,
        description="Continuous-discrete derivative-free EKF experiments",
    )
    parser.add_argument("--log-level", default=settings.log_level, help="Logging level (default: %(default)s)")
    sub = parser.add_subparsers(dest="command", required=True)

    # Flags default to None so only explicit ones override the config file
    run = sub.add_parser("run", help="Run a Monte Carlo experiment and write a CSV report")
    run.add_argument("--scenario", help=f"One of {', '.join(s.value for s in Scenario)}")
    run.add_argument("--filters", help=f"Comma-separated ids: {','.join(v.value for v in FilterVariant)}")
    run.add_argument("--alpha", type=float)
    run.add_argument("--tol", type=float, help="AbsTol = RelTol of the integrator")
    run.add_argument("--max-step", dest="max_step", type=float)
    run.add_argument("--runs", type=int)
    run.add_argument("--seed", type=int, help="Base seed; run i uses seed + i")
    run.add_argument("--sweep", help="Comma-separated sweep values (default: scenario sweep)")
    run.add_argument("--out", help="CSV report path")
    run.add_argument("--plot", help="SVG figure path")
    run.add_argument("--plot-kind", dest="plot_kind", choices=[k.value for k in PlotKind])
    run.add_argument("--workers", type=int, help="Worker processes for Monte Carlo runs")
    run.add_argument("--no-timing", dest="no_timing", action="store_const", const=True,
                     help="Leave mean_cpu_s empty so reports are reproducible byte for byte")
    run.add_argument("--sample-x0", dest="sample_x0", action="store_const", const=True,
                     help="Draw the true initial state from the prior instead of using its mean")
    run.add_argument("--config", help="Flat key=value file; explicit flags take precedence")

    simulate = sub.add_parser("simulate", help="Export one truth trajectory as CSV")
    simulate.add_argument("--model", required=True, choices=list(MODEL_FACTORIES))
    simulate.add_argument("--param", type=float, help="delta for cstr-ill, lambda for vdp")
    simulate.add_argument("--horizon", type=float, default=30.0)
    simulate.add_argument("--dt", type=float, default=1e-3)
    simulate.add_argument("--seed", type=int, default=settings.base_seed)
    simulate.add_argument("--out", required=True)
    return parser


def _flag_value(key: str, value):
    if key == "no_timing":
        truthy = value is True or str(value).strip().lower() in TRUE_WORDS
        return not truthy
    if key == "sample_x0":
        return value is True or str(value).strip().lower() in TRUE_WORDS
    return value


def experiment_config(args: argparse.Namespace) -> ExperimentConfig:
    """
    Merge Settings defaults, the --config file and explicit flags, in that order.

    Raises:
        ConfigError: Unknown key, unreadable file or invalid value
    """
    raw: dict = {}
    if args.config:
        values = dotenv_values(args.config)
        if not values and not _readable(args.config):
            raise ConfigError(f"Cannot read config file '{args.config}'", field="config")
        for key, value in values.items():
            key = key.strip().lower().replace("-", "_")
            if key not in CONFIG_KEYS:
                raise ConfigError(f"Unknown config key '{key}'", field=key)
            raw[key] = value

    for key in CONFIG_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            raw[key] = value

    if "scenario" not in raw:
        raise ConfigError("A scenario is required (--scenario or config file)", field="scenario")
    fields = {CONFIG_KEYS[k]: _flag_value(k, v) for k, v in raw.items() if v is not None}
    try:
        return ExperimentConfig(**fields)
    except ValidationError as e:
        first = e.errors()[0]
        field = ".".join(str(p) for p in first["loc"]) or None
        raise ConfigError(f"Invalid experiment configuration: {first['msg']}", field=field) from e


def _readable(path: str) -> bool:
    try:
        with open(path):
            return True
    except OSError:
        return False


def run_command(args: argparse.Namespace) -> int:
    config = experiment_config(args)
    logger.info(
        f"Scenario {config.scenario.value}: variants={','.join(v.value for v in config.variants)} "
        f"alpha={config.alpha:g} tol={config.let_tol:g} runs={config.runs} seed={config.base_seed}"
    )
    reports = run_experiment(config)
    diverged = sum(r.failed_runs for r in reports)
    logger.info(f"{len(reports)} report rows, {diverged} diverged filter runs")
    return EXIT_OK


def simulate_command(args: argparse.Namespace) -> int:
    model = build_model(args.model, args.param)
    truth = simulate_truth(model, args.dt, args.horizon, args.seed)
    truth.to_csv(args.out)
    logger.info(f"Wrote {truth.times.size} states of {model.name} to {args.out}")
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Parse arguments and dispatch; errors are mapped to exit codes by the handlers"""
    args = build_parser().parse_args(argv)
    configure_logging(str(args.log_level).upper())
    try:
        if args.command == "run":
            return run_command(args)
        return simulate_command(args)
    except Exception as e:
        return handle_exception(e)
