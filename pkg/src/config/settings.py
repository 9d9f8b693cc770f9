"""
Configuration Management for the slicexp toolkit

This module provides environment-driven settings for numerical tolerances,
sampling grids, series truncation, the polynomial root finder and logging.

Author: Slicexp Team
Version: 1.0.0
"""

from enum import Enum
from typing import Any, Dict, Optional

from pydantic import Field, ValidationInfo, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from ..core.exceptions import ConfigurationError


class LogLevel(str, Enum):
    """Logging levels"""
    DEBUG = "DEBUG"
    INFO = "INFO"
    WARNING = "WARNING"
    ERROR = "ERROR"
    CRITICAL = "CRITICAL"


class LogFormat(str, Enum):
    """Log output formats"""
    JSON = "json"
    TEXT = "text"


class ToleranceSettings(BaseSettings):
    """Numerical tolerances"""

    alg: float = Field(default=1e-10, gt=0.0, description="Algebraic membership tolerance (unit sphere, real points)")
    eval: float = Field(default=1e-9, gt=0.0, description="Evaluation tolerance for identity checks")
    root: float = Field(default=1e-9, gt=0.0, description="Residual tolerance for polynomial roots")
    cluster: float = Field(default=1e-6, gt=0.0, description="Relative radius for multiplicity clustering")
    series: float = Field(default=1e-12, gt=0.0, description="Remainder target for truncated *-series")

    model_config = SettingsConfigDict(env_prefix="SLICEXP_TOL_")


class GridSettings(BaseSettings):
    """Default sampling grid over a planar domain"""

    n_alpha: int = Field(default=21, ge=2, le=2001, description="Grid points along the real axis")
    n_beta: int = Field(default=21, ge=2, le=2001, description="Grid points along the imaginary axis")
    alpha_min: float = Field(default=-2.0, description="Lower real bound of the default box")
    alpha_max: float = Field(default=2.0, description="Upper real bound of the default box")
    beta_max: float = Field(default=2.0, gt=0.0, description="Half height of the default box")

    model_config = SettingsConfigDict(env_prefix="SLICEXP_GRID_")

    @field_validator("alpha_max")
    @classmethod
    def validate_alpha_range(cls, v: float, info: ValidationInfo) -> float:
        """Validate that the default box is not empty"""
        alpha_min = info.data.get("alpha_min", -2.0)
        if v <= alpha_min:
            raise ValueError("alpha_max must exceed alpha_min")
        return v


class SeriesSettings(BaseSettings):
    """Truncated series configuration"""

    max_terms: int = Field(default=200, ge=1, le=2000, description="Hard cap on the truncation depth N")
    mu_nu_series_radius: float = Field(
        default=25.0,
        gt=0.0,
        description="Largest |s| for which mu/nu are summed term by term",
    )

    model_config = SettingsConfigDict(env_prefix="SLICEXP_SERIES_")


class RootFinderSettings(BaseSettings):
    """Aberth-Ehrlich root finder configuration"""

    max_iterations: int = Field(default=500, ge=10, le=100000, description="Iterations per attempt")
    attempts: int = Field(default=3, ge=1, le=10, description="Attempts with rotated starting points")

    model_config = SettingsConfigDict(env_prefix="SLICEXP_ROOTS_")


class LoggingSettings(BaseSettings):
    """Logging configuration"""

    level: LogLevel = Field(default=LogLevel.WARNING, description="Logging level")
    format: LogFormat = Field(default=LogFormat.JSON, description="Log format (json or text)")
    file_path: Optional[str] = Field(default=None, description="Log file path")

    model_config = SettingsConfigDict(env_prefix="SLICEXP_LOG_")


class Settings(BaseSettings):
    """Main application settings"""

    app_name: str = Field(default="slicexp", description="Application name")
    app_version: str = Field(default="1.0.0", description="Application version")

    tolerances: ToleranceSettings = Field(default_factory=ToleranceSettings)
    grid: GridSettings = Field(default_factory=GridSettings)
    series: SeriesSettings = Field(default_factory=SeriesSettings)
    roots: RootFinderSettings = Field(default_factory=RootFinderSettings)
    logging: LoggingSettings = Field(default_factory=LoggingSettings)

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        validate_assignment=True,
        extra="ignore",
    )

    @field_validator("tolerances")
    @classmethod
    def validate_tolerance_ordering(cls, v: ToleranceSettings) -> ToleranceSettings:
        """The algebraic tolerance must not be looser than the evaluation tolerance"""
        if v.alg > v.eval:
            raise ValueError("tolerances.alg must not exceed tolerances.eval")
        return v

    def to_dict(self) -> Dict[str, Any]:
        """Convert settings to a JSON-friendly dictionary"""
        return self.model_dump(mode="json")


# Global settings instance
_settings: Optional[Settings] = None


def get_settings() -> Settings:
    """
    Get application settings (singleton pattern).

    Returns:
        Settings: Application settings instance
    """
    global _settings

    if _settings is None:
        try:
            _settings = Settings()
        except Exception as e:
            raise ConfigurationError(
                message=f"Failed to load configuration: {e}",
                error_code="CONFIG_LOAD_ERROR",
                context={"original_error": str(e)},
            )

    return _settings


def reload_settings() -> Settings:
    """
    Reload application settings.

    Returns:
        Settings: Reloaded settings instance
    """
    global _settings
    _settings = None
    return get_settings()
