"""Training-signal kernels: generator and modifier losses, win indicator, gate.

These are pure functions; :func:`emit_training_signals` packages them into
:class:`~autoparl.domain.LossRecord` lists for downstream trainers.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Iterable, NamedTuple, Sequence

from autoparl.domain import DEFAULT_STEEPNESS, LossRecord, SessionTranscript
from autoparl.errors import DomainError, StructureError
from autoparl.schedule import chain_for


def _check_unit(name: str, value: float) -> None:
    if not (0.0 <= value <= 1.0):
        raise DomainError(f"{name} must lie in [0, 1], got {value!r}")


def generator_loss(score: float) -> float:
    """Squared shortfall of a generation's own-evaluator score from 1."""
    _check_unit("score", score)
    return (1.0 - score) ** 2


def activation(threshold: float, score: float, steepness: float = DEFAULT_STEEPNESS) -> float:
    """Logistic gate that opens once ``score`` passes ``threshold``.

    >>> activation(0.5, 0.5)
    0.5
    """
    if not (0.0 < threshold < 1.0):
        raise DomainError(f"threshold must lie in (0, 1), got {threshold!r}")
    _check_unit("score", score)
    if not (steepness > 0):
        raise DomainError(f"steepness must be positive, got {steepness!r}")
    x = steepness * (threshold - score)
    if x > 700.0:
        return 0.0
    return 1.0 / (1.0 + math.exp(x))


def win_indicator(totals: Sequence[float], origin: int) -> int:
    """1 if chain ``origin`` (1-based) holds the maximum total, ties included."""
    if not totals:
        raise DomainError("totals must be non-empty")
    if not 1 <= origin <= len(totals):
        raise IndexError(f"origin {origin} out of range 1..{len(totals)}")
    return 1 if totals[origin - 1] == max(totals) else 0


class ModifierLoss(NamedTuple):
    self_alignment: float
    good_win: float
    total_alignment: float
    sum: float


def modifier_loss(s_self: float, win: int, act: float, s_total: float) -> ModifierLoss:
    _check_unit("s_self", s_self)
    _check_unit("act", act)
    _check_unit("s_total", s_total)
    if win not in (0, 1):
        raise DomainError(f"win must be 0 or 1, got {win!r}")
    l_self = (1.0 - s_self) ** 2
    l_win = (1.0 - win * act) ** 2
    l_total = (1.0 - s_total) ** 2
    return ModifierLoss(l_self, l_win, l_total, l_self + l_win + l_total)


def emit_training_signals(transcript: SessionTranscript) -> list[LossRecord]:
    """All loss records of a session, ordered by iteration then delegate.

    Needs score matrices and totals for every iteration 0..n-1 and the win
    flags for every modification iteration; the winner itself is not required.
    """
    config = transcript.config
    n = config.n
    if len(transcript.scores) < n or len(transcript.totals) < n:
        raise StructureError(
            f"transcript has {len(transcript.scores)} score matrices, expected {n}"
        )
    if len(transcript.win_flags) < n:
        raise StructureError("transcript is missing win flags")
    for k in range(n):
        if transcript.scores[k].iteration != k or transcript.scores[k].n != n:
            raise StructureError(f"score matrix for iteration {k} is missing or malformed")
        if len(transcript.totals[k]) != n:
            raise StructureError(f"totals for iteration {k} are malformed")

    records = [
        LossRecord("generator", i, 0, i, generator_loss(transcript.scores[0].score(i, i)))
        for i in range(1, n + 1)
    ]
    for k in range(1, n):
        matrix = transcript.scores[k]
        flags = transcript.win_flags[k]
        if len(flags) != n:
            raise StructureError(f"win flags for iteration {k} are malformed")
        for i in range(1, n + 1):
            j = chain_for(i, k, n)
            s_self = matrix.score(i, j)
            act = activation(config.threshold, s_self, config.steepness)
            parts = modifier_loss(s_self, flags[i - 1], act, transcript.totals[k][j - 1])
            records.extend(
                [
                    LossRecord("modifier-self", i, k, j, parts.self_alignment),
                    LossRecord("modifier-goodwin", i, k, j, parts.good_win),
                    LossRecord("modifier-total", i, k, j, parts.total_alignment),
                    LossRecord("modifier-sum", i, k, j, parts.sum),
                ]
            )
    return records


def write_jsonl(records: Iterable[LossRecord], path: str | Path) -> None:
    """One JSON object per line, in the given order."""
    with open(path, "w", encoding="utf-8") as fh:
        for r in records:
            fh.write(json.dumps(r.to_dict(), ensure_ascii=False))
            fh.write("\n")
