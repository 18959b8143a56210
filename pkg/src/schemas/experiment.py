"""Pydantic schemas for experiment configuration and report rows"""
import math
from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.config import settings
from src.filters.variant import FilterVariant, parse_variants


class Scenario(str, Enum):
    """Experiment scenarios"""
    CSTR_ACCURACY = "cstr-accuracy"
    CSTR_ILL_COND = "cstr-illcond"
    VDP_STIFFNESS = "vdp-stiffness"
    LTI_ORACLE = "lti-oracle"

    @classmethod
    def parse(cls, name: "str | Scenario") -> "Scenario":
        """Accept 'cstr-accuracy', 'CstrAccuracy', 'cstr_accuracy', ..."""
        if isinstance(name, cls):
            return name
        key = str(name).replace("-", "").replace("_", "").lower()
        for member in cls:
            if member.value.replace("-", "") == key:
                return member
        raise ValueError(f"Unknown scenario '{name}'")


class PlotKind(str, Enum):
    """SVG figure kinds"""
    ARMSE_VS_DELTA = "armse_vs_delta"
    ARMSE_VS_DELTAILL = "armse_vs_deltaill"
    ARMSE_VS_LAMBDA = "armse_vs_lambda"
    CPU_VS_DELTA = "cpu_vs_delta"


def _split_csv(v):
    if isinstance(v, str):
        return [part.strip() for part in v.split(",") if part.strip()]
    return v


class ExperimentConfig(BaseModel):
    """One Monte Carlo experiment"""
    model_config = ConfigDict(frozen=True)

    scenario: Scenario
    variants: list[FilterVariant] = Field(default_factory=lambda: list(FilterVariant))
    alpha: float = Field(default=settings.alpha, gt=0)
    let_tol: float = Field(default=settings.let_tol, gt=0)
    max_step: float = Field(default=settings.max_step, gt=0)
    runs: int = Field(default=settings.runs, ge=1)
    base_seed: int = Field(default=settings.base_seed, ge=0)
    sweep: list[float] = Field(default_factory=list)
    output_path: Optional[str] = None
    plot_path: Optional[str] = None
    plot_kind: Optional[PlotKind] = None
    timing: bool = True
    workers: int = Field(default=settings.workers, ge=1)
    sample_initial_state: bool = False

    @field_validator("scenario", mode="before")
    @classmethod
    def parse_scenario(cls, v):
        return Scenario.parse(v)

    @field_validator("variants", mode="before")
    @classmethod
    def parse_variant_ids(cls, v):
        variants = parse_variants(_split_csv(v))
        if not variants:
            raise ValueError("At least one filter variant is required")
        return variants

    @field_validator("sweep", mode="before")
    @classmethod
    def parse_sweep(cls, v):
        return [float(x) for x in _split_csv(v)]

    @model_validator(mode="after")
    def fill_defaults(self):
        """Scenario sweep and plot kind when none were given"""
        # Imported here: the scenario table depends on the model registry
        from src.bench.scenarios import SCENARIOS

        spec = SCENARIOS[self.scenario]
        if not self.sweep:
            object.__setattr__(self, "sweep", list(spec.default_sweep))
        if self.plot_kind is None:
            object.__setattr__(self, "plot_kind", spec.plot_kind)
        if any(not x > 0 for x in self.sweep):
            raise ValueError("Sweep values must be positive")
        return self


class RunReport(BaseModel):
    """Aggregate of one (sweep value, variant) cell"""
    model_config = ConfigDict(frozen=True)

    scenario: Scenario
    param: float
    variant: str
    armse: float
    mean_cpu_s: Optional[float] = None
    runs: int = Field(ge=1)
    failed_runs: int = Field(ge=0)
    first_failure_t: Optional[float] = None
    first_failure_cause: Optional[str] = None

    @model_validator(mode="after")
    def failures_within_runs(self):
        if self.failed_runs > self.runs:
            raise ValueError("failed_runs cannot exceed runs")
        if not math.isnan(self.armse) and self.armse < 0:
            raise ValueError("armse must be nonnegative")
        return self

    @property
    def diverged(self) -> bool:
        """Every run failed"""
        return self.failed_runs == self.runs
