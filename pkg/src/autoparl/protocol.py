"""Simultaneous Modification engine: aggregation, judges and the session loop."""

from __future__ import annotations

import logging
import math
import random
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from dataclasses import replace
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from autoparl.backends.base import BackendBinding, bind, run_evaluate, run_generate, run_modify
from autoparl.domain import (
    AnswerChain,
    Judge,
    ParliamentConfig,
    Question,
    Revision,
    ScoreMatrix,
    SessionTranscript,
)
from autoparl.errors import DimensionError, DomainError, SessionAborted
from autoparl.schedule import chain_for, plan_schedule
from autoparl.signals import emit_training_signals, win_indicator

log = logging.getLogger(__name__)


def total_alignment(scores: Sequence[float], weights: Sequence[float]) -> float:
    """Credence-weighted sum of one answer's evaluator scores.

    ``math.fsum`` keeps the result independent of summation order.
    """
    if len(scores) != len(weights):
        raise DimensionError(f"{len(scores)} scores for {len(weights)} weights")
    return math.fsum(w * s for w, s in zip(weights, scores))


def select_winner(
    totals: Sequence[float],
    judge: Judge | str = "argmax",
    rng: random.Random | None = None,
) -> int:
    """Pick the final answer (1-based chain origin).

    ``argmax`` breaks ties towards the smallest origin. ``proportional-chances``
    draws an origin with probability proportional to its total; pass ``rng``
    to draw repeatedly from one stream, otherwise the judge's seed is used.
    All-zero totals return 1 in both modes.
    """
    if isinstance(judge, str):
        judge = Judge(judge)
    if len(totals) == 0:
        raise DimensionError("cannot select a winner from no totals")
    if all(t == 0 for t in totals):
        return 1
    if judge.mode == "argmax":
        best = 0
        for idx in range(1, len(totals)):
            if totals[idx] > totals[best]:
                best = idx
        return best + 1

    if any(t < 0 for t in totals):
        raise DomainError("proportional chances needs non-negative totals")
    if rng is None:
        rng = random.Random(judge.seed)
    u = rng.random() * math.fsum(totals)
    acc = 0.0
    for idx, t in enumerate(totals):
        acc += t
        if u < acc:
            return idx + 1
    # u landed on the rounding slack above the running sum
    return max(i for i, t in enumerate(totals, 1) if t > 0)


@contextmanager
def _mapper(serial: bool, max_workers: int | None) -> Iterator[Callable]:
    if serial:
        yield lambda fn, items: [fn(x) for x in items]
        return
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        yield lambda fn, items: list(pool.map(fn, items))


class _SessionState:
    """Mutable scratch space; only ever touched between barriers."""

    def __init__(self, question: Question, config: ParliamentConfig):
        self.question = question
        self.config = config
        self.chains: list[AnswerChain] = []
        self.scores: list[ScoreMatrix] = []
        self.totals: list[tuple[float, ...]] = []
        self.win_flags: list[tuple[int, ...]] = []
        self.warnings: list[str] = []

    def snapshot(self, **extra) -> SessionTranscript:
        return SessionTranscript(
            question=self.question,
            config=self.config,
            chains=tuple(self.chains),
            scores=tuple(self.scores),
            totals=tuple(self.totals),
            win_flags=tuple(self.win_flags),
            warnings=tuple(self.warnings),
            **extra,
        )


def run_session(
    question: Question,
    config: ParliamentConfig,
    backends: Mapping[int, BackendBinding] | Iterable[BackendBinding],
    *,
    max_workers: int | None = None,
) -> SessionTranscript:
    """Run one full deliberation and return its immutable transcript.

    Every iteration, including the raw generations at ``k = 0``, is followed
    by a full n-by-n evaluation pass. Calls inside a phase run concurrently
    unless ``max_workers == 1`` or a backend declares ``concurrent = False``.

    Raises :class:`SessionAborted` carrying the partial transcript if any
    backend call fails.
    """
    bindings = bind(config, backends if isinstance(backends, Mapping) else list(backends))
    n = config.n
    stances = config.stances
    weights = config.weights
    serial = max_workers == 1 or not all(b.concurrent for b in bindings.values())
    state = _SessionState(question, config)

    def score_round(k: int, call: Callable) -> None:
        cells = [(x, j) for x in range(1, n + 1) for j in range(1, n + 1)]
        results = call(
            lambda c: run_evaluate(
                bindings[c[0]].evaluator,
                question,
                state.chains[c[1] - 1].current_text,
                stances[c[0] - 1],
            ),
            cells,
        )
        entries = [[0.0] * n for _ in range(n)]
        for (x, j), (score, warning) in zip(cells, results):
            entries[x - 1][j - 1] = score
            if warning:
                state.warnings.append(f"iteration {k}, chain {j}: {warning}")
                log.warning("iteration %d, chain %d: %s", k, j, warning)
        matrix = ScoreMatrix(k, tuple(tuple(r) for r in entries))
        totals = tuple(total_alignment(matrix.column(j), weights) for j in range(1, n + 1))
        flags = () if k == 0 else tuple(
            win_indicator(totals, chain_for(i, k, n)) for i in range(1, n + 1)
        )
        state.scores.append(matrix)
        state.totals.append(totals)
        state.win_flags.append(flags)

    with _mapper(serial, max_workers) as call:
        k = 0
        try:
            texts = call(lambda s: run_generate(bindings[s.id].generator, question, s), stances)
            state.chains = [AnswerChain(s.id, t) for s, t in zip(stances, texts)]
            score_round(0, call)
            for k, assignments in enumerate(plan_schedule(n), 1):
                outputs = call(
                    lambda a: run_modify(
                        bindings[a[0]].modifier,
                        question,
                        stances[a[0] - 1],
                        state.chains[a[1] - 1].current_text,
                        config.modification_policy,
                    ),
                    assignments,
                )
                for (i, j), (text, subtype) in zip(assignments, outputs):
                    state.chains[j - 1] = state.chains[j - 1].revised(Revision(k, i, text, subtype))
                score_round(k, call)
        except Exception as exc:
            raise SessionAborted(
                f"session aborted at iteration {k}: {exc}", state.snapshot()
            ) from exc

    final = state.totals[n - 1]
    winner = select_winner(final, config.judge)
    transcript = state.snapshot(final_totals=final, winner=winner)
    return replace(transcript, losses=tuple(emit_training_signals(transcript)))
