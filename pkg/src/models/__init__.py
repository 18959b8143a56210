"""Continuous-discrete models"""
from src.models.base import ModelSpec
from src.models.cstr import CstrIllCondModel, CstrModel
from src.models.lti import LtiModel, lti_oracle_model
from src.models.registry import build_model
from src.models.vanderpol import VanDerPolModel

__all__ = [
    "ModelSpec",
    "CstrModel",
    "CstrIllCondModel",
    "VanDerPolModel",
    "LtiModel",
    "lti_oracle_model",
    "build_model",
]
