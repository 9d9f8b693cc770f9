"""
Configuration package for slicexp

This package contains settings management: tolerances, sampling grids,
series truncation, root finding and logging.
"""

from .settings import (
    GridSettings,
    LoggingSettings,
    RootFinderSettings,
    SeriesSettings,
    Settings,
    ToleranceSettings,
    get_settings,
    reload_settings,
)

__all__ = [
    "Settings",
    "ToleranceSettings",
    "GridSettings",
    "SeriesSettings",
    "RootFinderSettings",
    "LoggingSettings",
    "get_settings",
    "reload_settings",
]
