"""Command-line entry point.

Exit codes: 0 success, 2 configuration or validation error, 3 backend
failure during a session.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

from autoparl.bench.datasets import BUILTIN, builtin_path, load_dataset
from autoparl.bench.metrics import evaluate_rows, reference_results
from autoparl.bench.report import render_report
from autoparl.config import load_run_config
from autoparl.domain import Judge, Question
from autoparl.errors import PairingError, ParliamentError, SessionAborted
from autoparl.protocol import run_session
from autoparl.schedule import format_schedule
from autoparl.signals import write_jsonl
from autoparl.transcript import write_transcript

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_BACKEND = 3
MAX_SEED = 2**64 - 1

log = logging.getLogger("autoparl")


class UsageError(ParliamentError):
    pass


def _seed(value: str) -> int:
    try:
        seed = int(value, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {value!r}") from None
    if not 0 <= seed <= MAX_SEED:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return seed


def _read_question(value: str) -> str:
    if value.startswith("@"):
        path = Path(value[1:])
        try:
            return path.read_text(encoding="utf-8").strip()
        except OSError as exc:
            raise UsageError(f"cannot read question file {path}: {exc}") from exc
    return value


def cmd_run(args: argparse.Namespace) -> int:
    config, bindings = load_run_config(args.config)
    overrides = {}
    if args.threshold is not None:
        overrides["threshold"] = args.threshold
    if args.judge is not None or args.seed is not None:
        overrides["judge"] = Judge(
            args.judge or config.judge.mode,
            args.seed if args.seed is not None else config.judge.seed,
        )
    if overrides:
        config = replace(config, **overrides)
    question = Question(args.question_id, _read_question(args.question))

    out = Path(args.out)
    try:
        transcript = run_session(question, config, bindings, max_workers=args.workers)
    except SessionAborted as exc:
        partial = out.with_name(out.stem + ".partial.json")
        write_transcript(exc.transcript, partial)
        print(f"error: {exc}", file=sys.stderr)
        print(f"partial transcript: {partial}", file=sys.stderr)
        return EXIT_BACKEND

    write_transcript(transcript, out)
    if args.signals:
        write_jsonl(transcript.losses, args.signals)
    w = transcript.winner
    stance = config.stances[w - 1]
    print(f"winner: chain {w} ({stance.name}), total alignment {transcript.final_totals[w - 1]:.4f}")
    print(transcript.winning_text)
    return EXIT_OK


def _dataset(ref: str):
    return load_dataset(builtin_path(ref) if ref in BUILTIN else ref)


def _label(raw: str) -> tuple[str, str]:
    model, _, condition = raw.partition(":")
    condition = condition or "amp"
    if condition not in ("amp", "single-value"):
        raise UsageError(f"label condition must be amp or single-value, got {condition!r}")
    return model, condition


def cmd_bench(args: argparse.Namespace) -> int:
    if args.reference:
        results = reference_results()
    else:
        if not args.expected or not args.actual:
            raise UsageError("bench needs --expected and at least one --actual (or --reference)")
        labels = args.label or [Path(a).stem for a in args.actual]
        if len(labels) != len(args.actual):
            raise UsageError(f"{len(labels)} labels for {len(args.actual)} --actual datasets")
        expected = _dataset(args.expected)
        results = []
        for ref, raw in zip(args.actual, labels):
            model, condition = _label(raw)
            results.append(evaluate_rows(expected, _dataset(ref), model, condition))

    for r in results:
        print(f"{r.model:<16} {r.condition:<13} loss {r.loss:.2f}")
    try:
        report = render_report(results)
    except PairingError as exc:
        print(f"(no improvement table: {exc})", file=sys.stderr)
        return EXIT_OK
    print()
    print(report.text, end="")
    if args.out:
        Path(args.out).write_text(report.csv, encoding="utf-8")
    return EXIT_OK


def cmd_schedule(args: argparse.Namespace) -> int:
    print(format_schedule(args.n), end="")
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    if not args.config and not args.dataset:
        raise UsageError("validate needs --config and/or --dataset")
    for path in args.config or ():
        config, _ = load_run_config(path)
        print(f"{path}: ok ({config.n} stances)")
    for ref in args.dataset or ():
        rows = _dataset(ref)
        print(f"{ref}: ok ({len(rows)} rows, stances: {', '.join(rows[0].stances)})")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="autoparl", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run one deliberation session")
    p.add_argument("--config", required=True)
    p.add_argument("--question", required=True, help="question text, or @path to read it")
    p.add_argument("--question-id", default="q1")
    p.add_argument("--out", default="transcript.json")
    p.add_argument("--signals", help="also write loss records as JSON lines")
    p.add_argument("--seed", type=_seed)
    p.add_argument("--judge", choices=("argmax", "proportional-chances"))
    p.add_argument("--threshold", type=float)
    p.add_argument("--workers", type=int, help="max concurrent backend calls; 1 serializes")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("bench", help="benchmark evaluator scores against expected scores")
    p.add_argument("--expected", help="CSV path or builtin dataset name")
    p.add_argument("--actual", action="append", help="CSV path or builtin dataset name")
    p.add_argument("--label", action="append", help="MODEL[:amp|single-value] per --actual")
    p.add_argument("--reference", action="store_true", help="score the shipped model-output datasets against the test set")
    p.add_argument("--out", help="write the comparison table as CSV")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("schedule", help="print the modification schedule for n delegates")
    p.add_argument("n", type=int)
    p.set_defaults(func=cmd_schedule)

    p = sub.add_parser("validate", help="check config files and datasets")
    p.add_argument("--config", action="append")
    p.add_argument("--dataset", action="append")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_CONFIG
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except SessionAborted as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BACKEND
    except (ParliamentError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
