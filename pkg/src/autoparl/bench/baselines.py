"""Non-parliamentary baselines for choosing among the delegates' first answers."""

from __future__ import annotations

import math
from typing import NamedTuple, Sequence

from autoparl.errors import DimensionError, DomainError, UnsupportedBaselineError


class Choice(NamedTuple):
    origin: int
    answer: str


def baseline_mft(answers: Sequence[str], weights: Sequence[float]) -> Choice:
    """My Favorite Theory: the answer of the highest-credence delegate."""
    if not answers:
        raise DimensionError("no answers to choose from")
    if len(answers) != len(weights):
        raise DimensionError(f"{len(answers)} answers for {len(weights)} weights")
    best = max(range(len(weights)), key=lambda i: (weights[i], -i))
    return Choice(best + 1, answers[best])


def baseline_mfo(
    answers: Sequence[str],
    scores: Sequence[Sequence[float]],
    weights: Sequence[float],
    threshold: float = 0.5,
) -> Choice:
    """My Favorite Option: the answer most likely to be permissible.

    ``scores[x][j]`` is evaluator x's score for answer j. Each score is
    binarized at ``threshold`` (inclusive) and the credence-weighted number of
    permitting evaluators decides; ties go to the higher weighted raw score,
    then to the smaller origin.
    """
    if not (0.0 < threshold < 1.0):
        raise DomainError(f"permissibility threshold must lie in (0, 1), got {threshold}")
    if not answers:
        raise DimensionError("no answers to choose from")
    if len(scores) != len(weights):
        raise DimensionError(f"{len(scores)} evaluator rows for {len(weights)} weights")
    for row in scores:
        if len(row) != len(answers):
            raise DimensionError(f"score row has {len(row)} entries for {len(answers)} answers")

    def key(j: int):
        permitted = math.fsum(w for w, row in zip(weights, scores) if row[j] >= threshold)
        total = math.fsum(w * row[j] for w, row in zip(weights, scores))
        return (permitted, total, -j)

    best = max(range(len(answers)), key=key)
    return Choice(best + 1, answers[best])


def baseline_mec(*args, **kwargs) -> Choice:
    raise UnsupportedBaselineError(
        "maximum expected choice-worthiness has no automated implementation"
    )
