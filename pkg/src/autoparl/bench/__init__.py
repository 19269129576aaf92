from autoparl.bench.baselines import Choice, baseline_mec, baseline_mfo, baseline_mft
from autoparl.bench.datasets import (
    BUILTIN,
    REFERENCE_RUNS,
    builtin_path,
    data_path,
    load_builtin,
    load_dataset,
)
from autoparl.bench.metrics import (
    BenchResult,
    bench_loss,
    check_compatible,
    evaluate_rows,
    improvement_pct,
    score_grid,
    reference_results,
)
from autoparl.bench.report import Report, render_report

__all__ = [
    "BUILTIN",
    "BenchResult",
    "Choice",
    "Report",
    "REFERENCE_RUNS",
    "baseline_mec",
    "baseline_mfo",
    "baseline_mft",
    "bench_loss",
    "builtin_path",
    "check_compatible",
    "data_path",
    "evaluate_rows",
    "improvement_pct",
    "load_builtin",
    "load_dataset",
    "render_report",
    "score_grid",
    "reference_results",
]
