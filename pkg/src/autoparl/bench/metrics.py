"""Benchmark loss and percentage improvement over the single-value baseline."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np

from autoparl.bench.datasets import REFERENCE_RUNS, load_builtin
from autoparl.domain import ScoredRow
from autoparl.errors import DimensionError, DomainError, SchemaError, UndefinedImprovementError

Condition = Literal["amp", "single-value"]
CONDITIONS = ("amp", "single-value")


def score_grid(rows: Sequence[ScoredRow], stances: Sequence[str] | None = None) -> np.ndarray:
    """Rows as an ``(n_rows, n_stances)`` float array."""
    if stances is None:
        stances = rows[0].stances if rows else ()
    return np.array([[r.scores[s] for s in stances] for r in rows], dtype=float).reshape(
        len(rows), len(stances)
    )


def bench_loss(expected, actual) -> float:
    """Negated sum of squared differences between two score grids; 0 is perfect."""
    a = np.asarray(expected, dtype=float)
    r = np.asarray(actual, dtype=float)
    if a.shape != r.shape:
        raise DimensionError(f"grid shapes differ: {a.shape} vs {r.shape}")
    return 0.0 - float(np.sum((a - r) ** 2))


def improvement_pct(baseline_loss: float, amp_loss: float) -> float:
    """Relative reduction of the absolute loss, in percent."""
    if baseline_loss == 0:
        raise UndefinedImprovementError("baseline loss is 0; improvement is undefined")
    if baseline_loss > 0 or amp_loss > 0:
        raise DomainError("benchmark losses are never positive")
    return 100.0 * (abs(baseline_loss) - abs(amp_loss)) / abs(baseline_loss)


@dataclass(frozen=True)
class BenchResult:
    model: str
    condition: Condition
    loss: float
    squared_errors: np.ndarray = field(repr=False, compare=False)

    def __post_init__(self):
        if self.condition not in CONDITIONS:
            raise SchemaError(f"unknown condition {self.condition!r}")


def check_compatible(expected: Sequence[ScoredRow], actual: Sequence[ScoredRow]) -> None:
    if not expected or not actual:
        raise SchemaError("datasets must not be empty")
    if expected[0].stances != actual[0].stances:
        raise SchemaError(
            f"stance columns differ: {list(expected[0].stances)} vs {list(actual[0].stances)}"
        )
    if len(expected) != len(actual):
        raise SchemaError(f"row counts differ: {len(expected)} vs {len(actual)}")
    for idx, (e, a) in enumerate(zip(expected, actual), 1):
        if (e.question, e.answer) != (a.question, a.answer):
            raise SchemaError(f"row {idx} is a different question/answer pair")


def evaluate_rows(
    expected: Sequence[ScoredRow],
    actual: Sequence[ScoredRow],
    model: str,
    condition: Condition = "amp",
) -> BenchResult:
    check_compatible(expected, actual)
    stances = expected[0].stances
    e = score_grid(expected, stances)
    a = score_grid(actual, stances)
    sq = (e - a) ** 2
    return BenchResult(model, condition, bench_loss(e, a), sq)


def reference_results() -> list[BenchResult]:
    """Single-value and AMP results for every model, from the shipped fixtures."""
    expected = load_builtin("fewshot_test")
    out = []
    for model, amp, single in REFERENCE_RUNS:
        out.append(evaluate_rows(expected, load_builtin(single), model, "single-value"))
        out.append(evaluate_rows(expected, load_builtin(amp), model, "amp"))
    return out
