"""Experiment harness: configuration, Monte-Carlo runner, figure sweeps and validation suites."""

from .config import ExperimentSpec, SystemConfig, load_config
from .figures import FIGURES, reproduce_figure
from .montecarlo import run_monte_carlo
from .results import ResultRow, ResultTable
from .validation import SUITES, validate

__all__ = ["ExperimentSpec", "SystemConfig", "load_config", "FIGURES", "reproduce_figure",
           "run_monte_carlo", "ResultRow", "ResultTable", "SUITES", "validate"]
