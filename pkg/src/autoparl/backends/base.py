"""Role interfaces and the contract checks the engine applies around them."""

from __future__ import annotations

import difflib
from dataclasses import dataclass
from typing import Mapping, Protocol, Sequence, runtime_checkable

from autoparl.domain import ModificationPolicy, ParliamentConfig, Question, StanceSpec
from autoparl.errors import BackendError, InvalidParliamentError, PolicyError
from autoparl.backends.scoring import coerce_score


@runtime_checkable
class Generator(Protocol):
    def generate(self, question: Question, stance: StanceSpec) -> str: ...


@runtime_checkable
class Modifier(Protocol):
    def modify(
        self, question: Question, stance: StanceSpec, text: str, policy: ModificationPolicy
    ) -> str: ...


@runtime_checkable
class Evaluator(Protocol):
    def evaluate(self, question: Question, answer: str, stance: StanceSpec) -> float | str: ...


@dataclass(frozen=True)
class BackendBinding:
    """The three role implementations serving one stance.

    A backend may set ``concurrent = False`` to make the engine serialize
    every call of the session.
    """

    stance_id: int
    generator: Generator
    modifier: Modifier
    evaluator: Evaluator

    @classmethod
    def single(cls, stance_id: int, backend) -> BackendBinding:
        return cls(stance_id, backend, backend, backend)

    @property
    def concurrent(self) -> bool:
        return all(
            getattr(b, "concurrent", True) for b in (self.generator, self.modifier, self.evaluator)
        )


def bind(
    config: ParliamentConfig, bindings: Mapping[int, BackendBinding] | Sequence[BackendBinding]
) -> dict[int, BackendBinding]:
    if not isinstance(bindings, Mapping):
        bindings = {b.stance_id: b for b in bindings}
    out = {}
    for s in config.stances:
        b = bindings.get(s.id)
        if b is None:
            raise InvalidParliamentError(f"stance {s.id} ({s.name}) has no backend binding")
        for role in ("generator", "modifier", "evaluator"):
            if getattr(b, role) is None:
                raise InvalidParliamentError(f"stance {s.id} ({s.name}) has no {role} bound")
        out[s.id] = b
    return out


def amend(text: str, suffix: str) -> str:
    return text + suffix


def classify_modification(before: str, after: str) -> str:
    """Name the sub-type of an edit: amendment, insertion, deletion, substitution."""
    if after.startswith(before) and len(after) > len(before):
        return "amendment"
    ops = {
        tag
        for tag, *_ in difflib.SequenceMatcher(None, before.split(), after.split()).get_opcodes()
        if tag != "equal"
    }
    if ops == {"insert"}:
        return "insertion"
    if ops == {"delete"}:
        return "deletion"
    if ops == {"replace"}:
        return "substitution"
    return "any-changes"


def run_generate(backend: Generator, question: Question, stance: StanceSpec) -> str:
    text = backend.generate(question, stance)
    if not isinstance(text, str) or not text.strip():
        raise BackendError(f"generator for stance {stance.id} returned no text")
    return text


def run_modify(
    backend: Modifier,
    question: Question,
    stance: StanceSpec,
    text: str,
    policy: ModificationPolicy,
) -> tuple[str, str]:
    """Call a modifier and enforce ``policy``; returns ``(new_text, subtype)``."""
    if not text:
        raise BackendError("cannot modify an empty answer")
    out = backend.modify(question, stance, text, policy)
    if not isinstance(out, str) or not out.strip():
        raise BackendError(f"modifier for stance {stance.id} returned no text")
    if policy == "amendments-only":
        if not out.startswith(text) or len(out) == len(text):
            raise PolicyError(
                f"modifier for stance {stance.id} did not extend the answer it was given"
            )
        return out, "amendment"
    return out, classify_modification(text, out)


def run_evaluate(
    backend: Evaluator, question: Question, answer: str, stance: StanceSpec
) -> tuple[float, str | None]:
    """Score an answer; returns the clamped score and a warning when clamping happened."""
    score, raw = coerce_score(backend.evaluate(question, answer, stance))
    warning = None
    if score != raw:
        warning = f"evaluator {stance.id} returned {raw}, clamped to {score}"
    return score, warning
