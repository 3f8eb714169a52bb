"""
Configuration Settings
إعدادات التكوين للتجارب
Environment driven defaults for experiments and acceptance thresholds.
"""
from functools import lru_cache

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from loopsoup import __version__

_LOG_LEVELS = {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}


class Settings(BaseSettings):
    """Package settings with environment variable support (prefix ``LOOPSOUP_``)"""

    model_config = SettingsConfigDict(
        env_prefix="LOOPSOUP_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=True,
        extra="ignore",
    )

    # Service Info
    SERVICE_NAME: str = "loopsoup"
    VERSION: str = __version__

    # Logging
    LOG_LEVEL: str = Field(default="INFO")
    LOG_JSON: bool = False

    # Execution
    WORKERS: int = Field(default=0, ge=0, description="0 means os.cpu_count()")
    DEFAULT_SEED: int = Field(default=20240607, ge=0)
    OUTPUT_DIR: str = "runs"

    # Numerics
    PD_TRUNCATION: float = 1e-12
    PD_REFERENCE_SAMPLES: int = Field(default=100_000, ge=1)
    MASS_TOLERANCE: float = 1e-9

    # Statistics
    KS_ALPHA: float = 0.01
    CI_SIGMAS: float = Field(default=3.0, gt=0)

    # Acceptance thresholds
    SURVIVAL_TOLERANCE: float = 0.02
    GIANT_FRACTION_TOLERANCE: float = 0.01
    PD_MOMENT_TOLERANCE: float = 0.05
    BALANCE_FACTOR: float = Field(default=5.0, gt=0)
    SPLIT_PROB_TOLERANCE: float = 0.02
    WINDING_SLOPE: float = 0.5
    WINDING_SLOPE_TOLERANCE: float = 0.1

    @field_validator("LOG_LEVEL")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        if v.upper() not in _LOG_LEVELS:
            raise ValueError(f"Invalid LOG_LEVEL {v!r}")
        return v.upper()

    @field_validator(
        "PD_TRUNCATION",
        "KS_ALPHA",
        "SURVIVAL_TOLERANCE",
        "GIANT_FRACTION_TOLERANCE",
        "PD_MOMENT_TOLERANCE",
        "SPLIT_PROB_TOLERANCE",
        "MASS_TOLERANCE",
    )
    @classmethod
    def validate_unit_interval(cls, v: float) -> float:
        if not 0.0 < v < 1.0:
            raise ValueError("value must lie in (0, 1)")
        return v


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance"""
    return Settings()


settings = get_settings()
