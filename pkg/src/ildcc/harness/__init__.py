"""Experiment orchestration: configuration, trial runners, outputs and the CLI."""

from .config import BaselineSettings, ColonySettings, ExperimentConfig, InstanceSettings, load_config
from .experiment import (
    AggregateRow,
    TrialResult,
    aggregate,
    build_scenario,
    run_baseline_sp3d,
    run_ildcc,
    traffic_sweep,
)
from .outputs import emit_outputs, read_results

__all__ = [
    "AggregateRow",
    "BaselineSettings",
    "ColonySettings",
    "ExperimentConfig",
    "InstanceSettings",
    "TrialResult",
    "aggregate",
    "build_scenario",
    "emit_outputs",
    "load_config",
    "read_results",
    "run_baseline_sp3d",
    "run_ildcc",
    "traffic_sweep",
]
