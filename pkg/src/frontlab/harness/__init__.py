"""Experiment harness: configuration, orchestration, and CSV reports."""

from .config import ExperimentConfig, echo_config, parse_config, parse_config_text
from .runner import ExperimentResult, run_experiment, sweep

__all__ = [
    "ExperimentConfig",
    "ExperimentResult",
    "echo_config",
    "parse_config",
    "parse_config_text",
    "run_experiment",
    "sweep",
]
