"""Scenario configuration, experiment orchestration, and serialization."""

from .config import SCHEMA, ConfigError, ScenarioConfig, parse_config_text
from .experiments import (ResultRecord, available_experiments,
                          export_density_matrix, run_experiment, run_gate,
                          run_wstate)
from .presets import (CALIBRATED_DISPERSIVE_PHOTON_EV,
                      FIGURE_DISPERSION_SCALE, PRESETS)

__all__ = [
    "SCHEMA", "ConfigError", "ScenarioConfig", "parse_config_text",
    "ResultRecord", "available_experiments", "export_density_matrix",
    "run_experiment", "run_gate", "run_wstate",
    "CALIBRATED_DISPERSIVE_PHOTON_EV", "FIGURE_DISPERSION_SCALE", "PRESETS",
]
