"""vitalcast: vital-sign time-series forecasting toolkit (C++ core)."""

from ._core import (
    ConfigError,
    VitalcastError,
    __version__,
    arima_fit,
    arima_forecast,
    experiment_reports,
    generate_csv,
    ksg_mi,
    mape,
    mse,
    rng_uniforms,
    validate_csv,
    vital_names,
)

__all__ = [
    "ConfigError",
    "VitalcastError",
    "__version__",
    "arima_fit",
    "arima_forecast",
    "experiment_reports",
    "generate_csv",
    "ksg_mi",
    "mape",
    "mse",
    "rng_uniforms",
    "validate_csv",
    "vital_names",
]
