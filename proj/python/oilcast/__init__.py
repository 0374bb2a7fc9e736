"""Python bindings for the oilcast correlation and forecasting core."""

import json as _json

from ._oilcast import (
    DataError,
    DegenerateError,
    OilcastError,
    ParseError,
    PipelineError,
    ProviderError,
    RateLimitError,
    align_files,
    autocorrelation,
    bucket_histogram,
    correlation_matrix,
    evaluate,
    gradient_check,
    param_count,
    parse_csv,
    pearson,
    read_frame,
    select_lookback,
    summary_stats,
    synthetic_market,
    windowed_correlations,
)
from ._oilcast import run_experiment as _run_experiment

__all__ = [
    "DataError",
    "DegenerateError",
    "OilcastError",
    "ParseError",
    "PipelineError",
    "ProviderError",
    "RateLimitError",
    "align_files",
    "autocorrelation",
    "bucket_histogram",
    "correlation_matrix",
    "evaluate",
    "gradient_check",
    "param_count",
    "parse_csv",
    "pearson",
    "read_frame",
    "run_experiment",
    "select_lookback",
    "summary_stats",
    "synthetic_market",
    "windowed_correlations",
]


def run_experiment(spec, frame_path, runs_root=None):
    """Run one experiment. `spec` is a dict or a JSON string in the CLI's spec format."""
    if not isinstance(spec, str):
        spec = _json.dumps(spec)
    return _run_experiment(spec, str(frame_path), None if runs_root is None else str(runs_root))
