"""Domain types shared by the engine, the loss kernels and the CLI.

All records are frozen dataclasses holding tuples, so a finished
:class:`SessionTranscript` can be handed to other threads without copying.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Literal

from autoparl.errors import InvalidParliamentError

JudgeMode = Literal["argmax", "proportional-chances"]
ModificationPolicy = Literal["any-changes", "amendments-only"]
LossKind = Literal[
    "generator", "modifier-self", "modifier-goodwin", "modifier-total", "modifier-sum"
]

JUDGE_MODES = ("argmax", "proportional-chances")
MODIFICATION_POLICIES = ("any-changes", "amendments-only")
LOSS_KINDS = ("generator", "modifier-self", "modifier-goodwin", "modifier-total", "modifier-sum")

DEFAULT_THRESHOLD = 0.5
DEFAULT_STEEPNESS = 20.0
DEFAULT_SEED = 20230801
WEIGHT_TOLERANCE = 1e-9


@dataclass(frozen=True)
class StanceSpec:
    id: int
    name: str
    weight: float

    def to_dict(self) -> dict[str, Any]:
        return {"id": self.id, "name": self.name, "weight": self.weight}


@dataclass(frozen=True)
class Judge:
    mode: JudgeMode = "argmax"
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if self.mode not in JUDGE_MODES:
            raise InvalidParliamentError(f"unknown judge mode {self.mode!r}")


def parse_weight(value: Any) -> float:
    """Accept a number or a fraction string such as ``"1/3"``."""
    if isinstance(value, str):
        try:
            return float(Fraction(value.strip()))
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidParliamentError(f"cannot parse weight {value!r}") from exc
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InvalidParliamentError(f"weight must be a number, got {value!r}")
    return float(value)


@dataclass(frozen=True)
class ParliamentConfig:
    stances: tuple[StanceSpec, ...]
    threshold: float = DEFAULT_THRESHOLD
    steepness: float = DEFAULT_STEEPNESS
    judge: Judge = field(default_factory=Judge)
    modification_policy: ModificationPolicy = "any-changes"

    def __post_init__(self):
        object.__setattr__(self, "stances", tuple(self.stances))
        n = len(self.stances)
        if n < 1:
            raise InvalidParliamentError("a parliament needs at least one stance")
        ids = [s.id for s in self.stances]
        if ids != list(range(1, n + 1)):
            raise InvalidParliamentError(f"stance ids must be 1..{n} in order, got {ids}")
        for s in self.stances:
            if not (s.weight >= 0) or math.isinf(s.weight):
                raise InvalidParliamentError(f"stance {s.id} has invalid weight {s.weight}")
        total = math.fsum(s.weight for s in self.stances)
        if abs(total - 1.0) > WEIGHT_TOLERANCE:
            raise InvalidParliamentError(f"weights sum to {total!r}, expected 1")
        if not (0.0 < self.threshold < 1.0):
            raise InvalidParliamentError(f"threshold must lie in (0, 1), got {self.threshold}")
        if not (self.steepness > 0) or math.isinf(self.steepness):
            raise InvalidParliamentError(f"steepness must be positive, got {self.steepness}")
        if self.modification_policy not in MODIFICATION_POLICIES:
            raise InvalidParliamentError(
                f"unknown modification policy {self.modification_policy!r}"
            )

    @classmethod
    def uniform(cls, names, **kwargs) -> ParliamentConfig:
        names = list(names)
        w = 1.0 / len(names) if names else 0.0
        return cls(tuple(StanceSpec(i, nm, w) for i, nm in enumerate(names, 1)), **kwargs)

    @property
    def n(self) -> int:
        return len(self.stances)

    @property
    def weights(self) -> tuple[float, ...]:
        return tuple(s.weight for s in self.stances)

    def to_dict(self) -> dict[str, Any]:
        return {
            "stances": [s.to_dict() for s in self.stances],
            "threshold": self.threshold,
            "steepness": self.steepness,
            "judge": {"mode": self.judge.mode, "seed": self.judge.seed},
            "modification_policy": self.modification_policy,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> ParliamentConfig:
        try:
            stances = tuple(
                StanceSpec(int(s["id"]), str(s["name"]), parse_weight(s["weight"]))
                for s in data["stances"]
            )
            judge = data.get("judge") or {}
            return cls(
                stances=stances,
                threshold=float(data.get("threshold", DEFAULT_THRESHOLD)),
                steepness=float(data.get("steepness", DEFAULT_STEEPNESS)),
                judge=Judge(judge.get("mode", "argmax"), int(judge.get("seed", DEFAULT_SEED))),
                modification_policy=data.get("modification_policy", "any-changes"),
            )
        except (KeyError, TypeError) as exc:
            raise InvalidParliamentError(f"malformed parliament config: {exc}") from exc


@dataclass(frozen=True)
class Question:
    id: str
    text: str

    def __post_init__(self):
        if not self.text or not self.text.strip():
            raise InvalidParliamentError("question text must be non-empty")


@dataclass(frozen=True)
class Revision:
    iteration: int
    modifier: int
    text: str
    subtype: str


@dataclass(frozen=True)
class AnswerChain:
    """One generator's answer and every modification applied to it."""

    origin: int
    generation: str
    revisions: tuple[Revision, ...] = ()

    @property
    def current_text(self) -> str:
        return self.revisions[-1].text if self.revisions else self.generation

    def revised(self, revision: Revision) -> AnswerChain:
        return AnswerChain(self.origin, self.generation, self.revisions + (revision,))

    def to_dict(self) -> dict[str, Any]:
        return {
            "origin": self.origin,
            "text": self.generation,
            "revisions": [
                {
                    "iteration": r.iteration,
                    "modifier": r.modifier,
                    "origin": self.origin,
                    "text": r.text,
                    "subtype": r.subtype,
                }
                for r in self.revisions
            ],
            "current_text": self.current_text,
        }


@dataclass(frozen=True)
class ScoreMatrix:
    """Scores after one iteration; ``entries[x-1][j-1]`` is evaluator x on chain j."""

    iteration: int
    entries: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        n = len(self.entries)
        for row in self.entries:
            if len(row) != n:
                raise InvalidParliamentError("score matrix must be square")
            for v in row:
                if not (0.0 <= v <= 1.0):
                    raise InvalidParliamentError(f"score {v} outside [0, 1]")

    @property
    def n(self) -> int:
        return len(self.entries)

    def score(self, evaluator: int, origin: int) -> float:
        return self.entries[evaluator - 1][origin - 1]

    def column(self, origin: int) -> tuple[float, ...]:
        return tuple(row[origin - 1] for row in self.entries)

    def row_major(self) -> list[float]:
        return [v for row in self.entries for v in row]


@dataclass(frozen=True)
class LossRecord:
    kind: LossKind
    delegate: int
    iteration: int
    origin: int
    value: float

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "delegate": self.delegate,
            "iteration": self.iteration,
            "origin": self.origin,
            "value": self.value,
        }


@dataclass(frozen=True)
class SessionTranscript:
    """Complete (or, after an abort, partial) record of one deliberation.

    ``totals[k]`` and ``win_flags[k]`` are indexed by iteration; ``win_flags[0]``
    is empty because nothing has been modified yet and ``win_flags[k][i-1]`` is
    the win indicator of modifier ``i``.
    """

    question: Question
    config: ParliamentConfig
    chains: tuple[AnswerChain, ...]
    scores: tuple[ScoreMatrix, ...] = ()
    totals: tuple[tuple[float, ...], ...] = ()
    win_flags: tuple[tuple[int, ...], ...] = ()
    final_totals: tuple[float, ...] | None = None
    winner: int | None = None
    losses: tuple[LossRecord, ...] = ()
    warnings: tuple[str, ...] = ()

    @property
    def complete(self) -> bool:
        return self.winner is not None

    @property
    def winning_text(self) -> str | None:
        if self.winner is None:
            return None
        return self.chains[self.winner - 1].current_text

    def to_dict(self) -> dict[str, Any]:
        iterations = []
        for k, matrix in enumerate(self.scores):
            modifications = []
            if k >= 1:
                for chain in self.chains:
                    for r in chain.revisions:
                        if r.iteration == k:
                            modifications.append(
                                {
                                    "iteration": k,
                                    "modifier": r.modifier,
                                    "origin": chain.origin,
                                    "text": r.text,
                                    "subtype": r.subtype,
                                }
                            )
                modifications.sort(key=lambda m: m["modifier"])
            iterations.append(
                {
                    "iteration": k,
                    "modifications": modifications,
                    "scores": matrix.row_major(),
                    "totals": list(self.totals[k]) if k < len(self.totals) else None,
                    "win_flags": list(self.win_flags[k]) if k < len(self.win_flags) else None,
                }
            )
        return {
            "schema_version": 1,
            "complete": self.complete,
            "question": {"id": self.question.id, "text": self.question.text},
            "config": self.config.to_dict(),
            "chains": [c.to_dict() for c in self.chains],
            "iterations": iterations,
            "final_totals": list(self.final_totals) if self.final_totals is not None else None,
            "winner": self.winner,
            "winning_text": self.winning_text,
            "losses": [r.to_dict() for r in self.losses],
            "warnings": list(self.warnings),
        }


@dataclass(frozen=True)
class ScoredRow:
    """A question/answer pair with one expected score per stance column."""

    question: str
    answer: str
    scores: dict[str, float]

    @property
    def stances(self) -> tuple[str, ...]:
        return tuple(self.scores)
