"""Turning evaluator output into scores in [0, 1]."""

from __future__ import annotations

import math
import re
import warnings

from autoparl.errors import ScoreParseError

_DECIMAL = re.compile(r"[-+]?(?:\d+(?:\.\d*)?|\.\d+)")


class ScoreClampWarning(UserWarning):
    pass


def extract_score(text: str) -> float:
    """First decimal literal in ``text``, unclamped."""
    m = _DECIMAL.search(text)
    if m is None:
        raise ScoreParseError(f"no decimal score in model output {text[:80]!r}")
    return float(m.group())


def clamp_score(value: float) -> tuple[float, bool]:
    if math.isnan(value):
        raise ScoreParseError("score is NaN")
    clamped = min(1.0, max(0.0, value))
    return clamped, clamped != value


def coerce_score(raw: object) -> tuple[float, float]:
    """Return ``(clamped, raw_value)`` for a number or a model's text reply."""
    if isinstance(raw, str):
        value = extract_score(raw)
    elif isinstance(raw, (int, float)) and not isinstance(raw, bool):
        value = float(raw)
    else:
        raise ScoreParseError(f"evaluator returned non-numeric output {raw!r}")
    clamped, _ = clamp_score(value)
    return clamped, value


def parse_score(text: str) -> float:
    """Parse a model reply; out-of-range values are clamped with a warning."""
    value = extract_score(text)
    clamped, changed = clamp_score(value)
    if changed:
        warnings.warn(f"score {value} clamped to {clamped}", ScoreClampWarning, stacklevel=2)
    return clamped
