"""CSV loaders for scored question/answer datasets.

Format: UTF-8 CSV with header ``question,answer,<stance...>`` and one score in
[0, 1] per stance column.
"""

from __future__ import annotations

import csv
from importlib import resources
from pathlib import Path

from autoparl.domain import ScoredRow
from autoparl.errors import DatasetValidationError, SchemaError

BUILTIN = {
    "fewshot_train": "fewshot_train.csv",
    "fewshot_test": "fewshot_test.csv",
    "claude_amp": "claude_amp.csv",
    "claude_single_value": "claude_single_value.csv",
    "bard_amp": "bard_amp.csv",
    "bard_single_value": "bard_single_value.csv",
    "chatgpt_amp": "chatgpt_amp.csv",
    "chatgpt_single_value": "chatgpt_single_value.csv",
}
GENERATOR_SAMPLES = "generator_samples.csv"

# (model label, AMP dataset, single-value dataset), in the published column order
REFERENCE_RUNS = (
    ("Claude", "claude_amp", "claude_single_value"),
    ("Bard", "bard_amp", "bard_single_value"),
    ("ChatGPT", "chatgpt_amp", "chatgpt_single_value"),
)


def data_path(filename: str) -> Path:
    return Path(str(resources.files("autoparl") / "data" / filename))


def builtin_path(name: str) -> Path:
    try:
        return data_path(BUILTIN[name])
    except KeyError:
        raise KeyError(f"unknown builtin dataset {name!r}; have {sorted(BUILTIN)}") from None


def load_dataset(path: str | Path) -> list[ScoredRow]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise DatasetValidationError(f"{path}: empty file")
        header = [h.strip() for h in header]
        if header[:2] != ["question", "answer"]:
            raise SchemaError(f"{path}: header must start with question,answer; got {header[:2]}")
        stances = header[2:]
        if not stances:
            raise SchemaError(f"{path}: no stance score columns")
        if len(set(stances)) != len(stances):
            raise SchemaError(f"{path}: duplicate stance columns")

        rows = []
        for lineno, record in enumerate(reader, 2):
            if not any(cell.strip() for cell in record):
                continue
            if len(record) != len(header):
                raise SchemaError(
                    f"{path}:{lineno}: expected {len(header)} fields, got {len(record)}"
                )
            scores = {}
            for col, cell in zip(stances, record[2:]):
                try:
                    value = float(cell)
                except ValueError:
                    raise DatasetValidationError(
                        f"{path}:{lineno}: column {col!r} is not a number: {cell!r}"
                    ) from None
                if not (0.0 <= value <= 1.0):
                    raise DatasetValidationError(
                        f"{path}:{lineno}: column {col!r} score {value} outside [0, 1]"
                    )
                scores[col] = value
            rows.append(ScoredRow(record[0], record[1], scores))
    if not rows:
        raise DatasetValidationError(f"{path}: no data rows")
    return rows


def load_builtin(name: str) -> list[ScoredRow]:
    return load_dataset(builtin_path(name))
