"""Physics-informed network solver for a beam under a moving point load."""

from ._beampinn import (
    BeamConfig,
    ConfigError,
    DeltaModel,
    IoError,
    MetricError,
    TrainingError,
    UsageError,
    analytical_deflection,
    default_config,
    fit_delta,
    gaussian_delta,
    init_params,
    network_derivatives,
    read_field_csv,
    reference_deflection,
    relative_error_percent,
    train,
    validate_config,
    write_field_csv,
)

__all__ = [
    "BeamConfig",
    "ConfigError",
    "DeltaModel",
    "IoError",
    "MetricError",
    "TrainingError",
    "UsageError",
    "analytical_deflection",
    "default_config",
    "fit_delta",
    "gaussian_delta",
    "init_params",
    "network_derivatives",
    "read_field_csv",
    "reference_deflection",
    "relative_error_percent",
    "train",
    "validate_config",
    "write_field_csv",
]
