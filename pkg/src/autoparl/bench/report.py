"""Comparison tables for benchmark results."""

from __future__ import annotations

import csv
import io
from typing import NamedTuple, Sequence

from autoparl.bench.metrics import BenchResult, improvement_pct
from autoparl.errors import PairingError


class Report(NamedTuple):
    text: str
    csv: str
    improvements: dict[str, float]
    mean_improvement: float


def render_report(results: Sequence[BenchResult]) -> Report:
    """Loss per model and condition, improvement per model and the mean improvement.

    Every model needs exactly one ``amp`` and one ``single-value`` result.
    Losses are shown with two decimals, improvements with one.
    """
    if not results:
        raise PairingError("no results to report")
    models: dict[str, dict[str, BenchResult]] = {}
    for r in results:
        slot = models.setdefault(r.model, {})
        if r.condition in slot:
            raise PairingError(f"duplicate {r.condition} result for {r.model}")
        slot[r.condition] = r
    for model, slot in models.items():
        missing = {"amp", "single-value"} - set(slot)
        if missing:
            raise PairingError(f"{model} has no {' or '.join(sorted(missing))} result to pair with")

    improvements = {
        m: improvement_pct(s["single-value"].loss, s["amp"].loss) for m, s in models.items()
    }
    mean = sum(improvements.values()) / len(improvements)

    width = max(12, *(len(m) for m in models))
    lines = [f"{'model':<{width}} {'single-value':>12} {'amp':>8} {'% improvement':>14}"]
    for m, s in models.items():
        lines.append(
            f"{m:<{width}} {s['single-value'].loss:>12.2f} {s['amp'].loss:>8.2f} "
            f"{improvements[m]:>14.1f}"
        )
    lines.append(f"{'mean':<{width}} {'':>12} {'':>8} {mean:>14.1f}")

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["model", "condition", "loss", "improvement_pct"])
    for m, s in models.items():
        writer.writerow([m, "single-value", f"{s['single-value'].loss:.2f}", ""])
        writer.writerow([m, "amp", f"{s['amp'].loss:.2f}", f"{improvements[m]:.1f}"])
    writer.writerow(["mean", "", "", f"{mean:.1f}"])
    return Report("\n".join(lines) + "\n", buf.getvalue(), improvements, mean)
