"""CLI entry point, benchmark suites, and the persistent run store."""

from .bench import BenchResult, FitResult, bench_depth_scaling, bench_gates, bench_qubit_scaling
from .records import FinalState, QueryResult, RunRecord, default_store_path, store_append, store_query
from .runner import run_file

__all__ = [
    "BenchResult",
    "FitResult",
    "FinalState",
    "QueryResult",
    "RunRecord",
    "bench_depth_scaling",
    "bench_gates",
    "bench_qubit_scaling",
    "default_store_path",
    "run_file",
    "store_append",
    "store_query",
]
