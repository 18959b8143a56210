"""Model lookup by command-line name"""
from typing import Callable, Optional

from pydantic import ValidationError

from src.exceptions.base import ConfigError
from src.models.base import ModelSpec
from src.models.cstr import CstrIllCondModel, CstrModel
from src.models.lti import LtiModel
from src.models.vanderpol import VanDerPolModel


# name -> factory taking the scenario parameter (ignored by parameterless models)
MODEL_FACTORIES: dict[str, Callable[[Optional[float]], ModelSpec]] = {
    "cstr": lambda param: CstrModel(),
    "cstr-ill": lambda param: CstrIllCondModel() if param is None else CstrIllCondModel(delta=param),
    "vdp": lambda param: VanDerPolModel() if param is None else VanDerPolModel(lam=param),
    "lti-test": lambda param: LtiModel(),
}


def build_model(name: str, param: Optional[float] = None) -> ModelSpec:
    """
    Build a registered model.

    Args:
        name: One of cstr, cstr-ill, vdp, lti-test
        param: delta for cstr-ill, lam for vdp

    Raises:
        ConfigError: Unknown name or invalid parameter
    """
    factory = MODEL_FACTORIES.get(name)
    if factory is None:
        raise ConfigError(f"Unknown model '{name}' (choose from {', '.join(MODEL_FACTORIES)})", field="model")
    try:
        return factory(param)
    except ValidationError as e:
        raise ConfigError(f"Invalid parameter {param!r} for model '{name}': {e}", field="param") from e
