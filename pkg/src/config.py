"""Application configuration using Pydantic Settings"""
from pydantic_settings import BaseSettings, SettingsConfigDict
from pydantic import field_validator


class Settings(BaseSettings):
    """Toolkit defaults, overridable through CDEKF_* environment variables or .env"""

    # Derivative-free EKF scaling parameter
    alpha: float = 1e3

    # Integrator: AbsTol = RelTol = LET, plus the step caps
    let_tol: float = 1e-4
    max_step: float = 0.1
    max_steps: int = 200_000

    # Monte Carlo harness
    runs: int = 100
    base_seed: int = 42
    workers: int = 1

    # Application
    app_name: str = "cdekf"
    log_level: str = "INFO"

    @field_validator("log_level", mode="before")
    @classmethod
    def normalize_log_level(cls, v):
        """Accept log levels in any case"""
        if isinstance(v, str):
            return v.strip().upper()
        return v

    model_config = SettingsConfigDict(
        env_prefix="CDEKF_",
        env_file=".env",
        case_sensitive=False,
        extra="ignore",
    )


# Global settings instance
settings = Settings()
