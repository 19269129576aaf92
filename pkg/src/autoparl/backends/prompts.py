"""Prompt templates and few-shot evaluator prompt assembly.

Templates live next to this module as plain text with ``{{name}}``
placeholders.
"""

from __future__ import annotations

import re
from functools import lru_cache
from importlib import resources
from typing import Sequence

from autoparl.domain import ScoredRow, StanceSpec
from autoparl.errors import SchemaError

_PLACEHOLDER = re.compile(r"\{\{(\w+)\}\}")


@lru_cache(maxsize=None)
def load_template(name: str) -> str:
    path = resources.files("autoparl.backends") / "templates" / f"{name}.txt"
    return path.read_text(encoding="utf-8")


def render(template: str, **values: object) -> str:
    def sub(m: re.Match) -> str:
        key = m.group(1)
        if key not in values:
            raise SchemaError(f"template placeholder {{{{{key}}}}} has no value")
        return str(values[key])

    return _PLACEHOLDER.sub(sub, template)


def format_score(score: float) -> str:
    return f"{score:g}"


def build_fewshot_prompt(
    rows: Sequence[ScoredRow],
    stance: StanceSpec | str,
    question: str,
    answer: str,
) -> str:
    """Evaluator prompt: instructions, one scored exemplar per row, then the target.

    With no rows this degrades to the zero-shot single-value prompt, which
    asks for one overall morality score and does not mention the stance.
    """
    name = stance.name if isinstance(stance, StanceSpec) else stance
    if not rows:
        return render(load_template("evaluator_single_value"), question=question, answer=answer)
    for idx, row in enumerate(rows, 1):
        if name not in row.scores:
            raise SchemaError(f"training row {idx} has no {name!r} score column")
    parts = [render(load_template("evaluator_header"), stance=name).rstrip("\n")]
    exemplar = load_template("evaluator_exemplar")
    for row in rows:
        parts.append(
            render(
                exemplar,
                question=row.question,
                answer=row.answer,
                stance=name,
                score=format_score(row.scores[name]),
            ).rstrip("\n")
        )
    parts.append(
        render(load_template("evaluator_target"), question=question, answer=answer, stance=name)
        .rstrip("\n")
    )
    return "\n\n".join(parts) + "\n"
