"""Monte Carlo experiments, reports and the command-line interface."""

from .config import EXPERIMENTS, ExperimentConfig, load_config, parse_config, run_config
from .experiments import (
    DEFAULT_WORDS,
    FREENESS_WORDS,
    Tolerance,
    estimate_star_moment,
    estimate_star_moments,
    run_annulus_check,
    run_blockmodel_check,
    run_decoupling_check,
    run_dyson_check,
    run_fpinv_sweep,
    run_freeness_check,
    run_moment_check,
)
from .models import Ensemble
from .report import REPORT_SCHEMA, ReportRow, rows_to_csv, rows_to_json, summary_table, write_report
from .stats import MomentEstimate, run_trials, summarize, word_trace, word_traces

__all__ = [
    "DEFAULT_WORDS",
    "EXPERIMENTS",
    "Ensemble",
    "ExperimentConfig",
    "FREENESS_WORDS",
    "MomentEstimate",
    "REPORT_SCHEMA",
    "ReportRow",
    "Tolerance",
    "estimate_star_moment",
    "estimate_star_moments",
    "load_config",
    "parse_config",
    "rows_to_csv",
    "rows_to_json",
    "run_annulus_check",
    "run_blockmodel_check",
    "run_config",
    "run_decoupling_check",
    "run_dyson_check",
    "run_fpinv_sweep",
    "run_freeness_check",
    "run_moment_check",
    "run_trials",
    "summarize",
    "summary_table",
    "word_trace",
    "word_traces",
    "write_report",
]
