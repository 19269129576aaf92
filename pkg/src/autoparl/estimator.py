"""Few-shot stance evaluator with an estimator-style interface.

``fit`` memorises the scored training rows that become prompt exemplars,
``predict`` asks the model for one score per stance and ``score`` returns the
benchmark loss (higher is better, 0 is perfect), so the evaluator can be
cloned, grid-searched over its parameters or dropped into other tooling.
"""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from autoparl.backends.prompts import build_fewshot_prompt
from autoparl.backends.scoring import parse_score
from autoparl.bench.metrics import bench_loss, score_grid
from autoparl.domain import ScoredRow
from autoparl.errors import ConfigurationError, SchemaError

DEFAULT_STANCES = ("deontology", "utilitarianism", "virtue ethics")


def _pairs(X) -> list[tuple[str, str]]:
    out = []
    for item in X:
        if isinstance(item, ScoredRow):
            out.append((item.question, item.answer))
        else:
            question, answer = item
            out.append((str(question), str(answer)))
    return out


class FewShotEvaluator(BaseEstimator):
    """Score question/answer pairs along several stances with a chat model.

    Parameters
    ----------
    complete : callable
        ``prompt -> reply text``; typically a :class:`~autoparl.backends.ChatClient`.
    stances : sequence of str
        Stance columns to predict, in output order.
    mode : {"amp", "single-value"}
        ``amp`` prompts once per stance with the training rows as exemplars.
        ``single-value`` asks one zero-shot question per pair and copies the
        answer into every stance column.
    """

    def __init__(
        self,
        complete: Callable[[str], str] | None = None,
        stances: Sequence[str] = DEFAULT_STANCES,
        mode: str = "amp",
    ):
        self.complete = complete
        self.stances = stances
        self.mode = mode

    def fit(self, X: Sequence[ScoredRow], y=None) -> FewShotEvaluator:
        if self.mode not in ("amp", "single-value"):
            raise ConfigurationError(f"unknown evaluator mode {self.mode!r}")
        rows = tuple(X)
        for idx, row in enumerate(rows, 1):
            missing = [s for s in self.stances if s not in row.scores]
            if missing:
                raise SchemaError(f"training row {idx} lacks stance columns {missing}")
        self.training_rows_ = rows if self.mode == "amp" else ()
        self.n_stances_ = len(self.stances)
        return self

    def predict(self, X) -> np.ndarray:
        check_is_fitted(self, "training_rows_")
        if self.complete is None:
            raise ConfigurationError("FewShotEvaluator needs a completion callable")
        pairs = _pairs(X)
        out = np.empty((len(pairs), len(self.stances)), dtype=float)
        for r, (question, answer) in enumerate(pairs):
            if self.mode == "single-value":
                prompt = build_fewshot_prompt((), "", question, answer)
                out[r, :] = parse_score(self.complete(prompt))
                continue
            for c, stance in enumerate(self.stances):
                prompt = build_fewshot_prompt(self.training_rows_, stance, question, answer)
                out[r, c] = parse_score(self.complete(prompt))
        return out

    def predict_rows(self, X: Sequence[ScoredRow]) -> list[ScoredRow]:
        grid = self.predict(X)
        return [
            ScoredRow(q, a, dict(zip(self.stances, map(float, scores))))
            for (q, a), scores in zip(_pairs(X), grid)
        ]

    def score(self, X, y=None) -> float:
        if y is None:
            y = score_grid(list(X), self.stances)
        return bench_loss(y, self.predict(X))
