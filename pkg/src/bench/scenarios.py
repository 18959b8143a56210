"""Scenario table: model, grids, integrator and default sweep per experiment"""
from typing import Optional

from pydantic import BaseModel, ConfigDict

from src.models.base import ModelSpec
from src.models.registry import build_model
from src.odesolve.options import OdeMethod
from src.schemas.experiment import PlotKind, Scenario


class ScenarioSpec(BaseModel):
    """
    How one scenario maps a sweep value to a simulation.

    When period is None the sweep value is the sampling period; otherwise it is
    the model parameter.
    """
    model_config = ConfigDict(frozen=True)

    model_name: str
    param_name: str
    horizon: float
    truth_dt: float
    period: Optional[float] = None
    method: OdeMethod = OdeMethod.NONSTIFF_RK45
    default_sweep: tuple[float, ...]
    plot_kind: PlotKind
    log_sweep: bool = False
    truth_refinements: int = 0
    exact_reference: bool = False

    def build_model(self, param: float) -> ModelSpec:
        return build_model(self.model_name, None if self.period is None else param)

    def sampling_period(self, param: float) -> float:
        return param if self.period is None else self.period


SCENARIOS: dict[Scenario, ScenarioSpec] = {
    Scenario.CSTR_ACCURACY: ScenarioSpec(
        model_name="cstr",
        param_name="delta",
        horizon=30.0,
        truth_dt=1e-3,
        default_sweep=tuple(0.5 * k for k in range(1, 11)),
        plot_kind=PlotKind.ARMSE_VS_DELTA,
    ),
    Scenario.CSTR_ILL_COND: ScenarioSpec(
        model_name="cstr-ill",
        param_name="delta_ill",
        horizon=30.0,
        truth_dt=1e-3,
        period=1.0,
        default_sweep=tuple(float(f"1e-{p}") for p in range(1, 16)),
        plot_kind=PlotKind.ARMSE_VS_DELTAILL,
        log_sweep=True,
    ),
    Scenario.VDP_STIFFNESS: ScenarioSpec(
        model_name="vdp",
        param_name="lambda",
        horizon=2.0,
        truth_dt=1e-5,
        period=0.2,
        method=OdeMethod.STIFF_IMPLICIT,
        default_sweep=tuple(10.0 ** p for p in range(0, 5)),
        plot_kind=PlotKind.ARMSE_VS_LAMBDA,
        log_sweep=True,
        truth_refinements=1,
    ),
    Scenario.LTI_ORACLE: ScenarioSpec(
        model_name="lti-test",
        param_name="delta",
        horizon=5.0,
        truth_dt=1e-3,
        default_sweep=(0.1,),
        plot_kind=PlotKind.ARMSE_VS_DELTA,
        exact_reference=True,
    ),
}
