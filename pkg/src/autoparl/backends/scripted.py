"""Deterministic table-driven backends for tests and offline demos."""

from __future__ import annotations

import csv
import json
from pathlib import Path
from types import MappingProxyType
from typing import Any, Mapping

from autoparl.domain import ModificationPolicy, Question, StanceSpec
from autoparl.errors import BackendError, SchemaError

ROLES = ("generate", "modify", "evaluate")
WILDCARD = "*"


class ScriptedTable:
    """Immutable lookup from ``(role, stance id, key)`` to a fixed output.

    Keys are the question text (or id) for ``generate``, the incoming answer for
    ``modify`` and the answer under review for ``evaluate``. Lookups try the
    stance's own key, the key under ``"*"``, the stance default, then the role
    default.

    The JSON form nests role -> stance id -> key -> output, with ``"*"``
    standing for "any stance" or "any key"::

        {"evaluate": {"*": {"*": 0.5}}, "generate": {"1": {"Is lying wrong?": "Yes."}}}
    """

    def __init__(self, entries: Mapping[tuple[str, Any, str], Any]):
        cleaned = {}
        for (role, stance, key), value in entries.items():
            if role not in ROLES:
                raise SchemaError(f"unknown role {role!r} in scripted table")
            stance = WILDCARD if stance == WILDCARD else int(stance)
            cleaned[(role, stance, key)] = value
        self._entries = MappingProxyType(cleaned)

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> ScriptedTable:
        entries = {}
        for role, by_stance in data.items():
            if not isinstance(by_stance, Mapping):
                raise SchemaError(f"role {role!r} must map stance ids to tables")
            for stance, by_key in by_stance.items():
                if not isinstance(by_key, Mapping):
                    raise SchemaError(f"{role}/{stance} must map keys to outputs")
                for key, value in by_key.items():
                    entries[(role, stance, key)] = value
        return cls(entries)

    @classmethod
    def from_json(cls, path: str | Path) -> ScriptedTable:
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    @classmethod
    def from_generator_samples(
        cls, path: str | Path, stances: list[StanceSpec] | tuple[StanceSpec, ...]
    ) -> ScriptedTable:
        """Generator entries from a ``question,<stance...>`` completions CSV."""
        entries = {}
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            for s in stances:
                if s.name not in (reader.fieldnames or []):
                    raise SchemaError(f"no completions column for stance {s.name!r}")
            for row in reader:
                for s in stances:
                    entries[("generate", s.id, row["question"])] = row[s.name]
        return cls(entries)

    def merged(self, other: ScriptedTable) -> ScriptedTable:
        """A new table where entries of ``other`` win."""
        return ScriptedTable({**self._entries, **other._entries})

    def lookup(self, role: str, stance: int, *keys: str) -> Any:
        probes = [(role, s, key) for s in (stance, WILDCARD) for key in keys]
        probes += [(role, stance, WILDCARD), (role, WILDCARD, WILDCARD)]
        for probe in probes:
            if probe in self._entries:
                return self._entries[probe]
        raise BackendError(f"scripted table has no {role} entry for stance {stance}: {keys[0][:60]!r}")

    def __len__(self) -> int:
        return len(self._entries)


class ScriptedBackend:
    """Serves all three roles for every stance from one :class:`ScriptedTable`."""

    concurrent = True

    def __init__(self, table: ScriptedTable):
        self.table = table

    def generate(self, question: Question, stance: StanceSpec) -> str:
        return self.table.lookup("generate", stance.id, question.text, question.id)

    def modify(
        self, question: Question, stance: StanceSpec, text: str, policy: ModificationPolicy
    ) -> str:
        return self.table.lookup("modify", stance.id, text)

    def evaluate(self, question: Question, answer: str, stance: StanceSpec):
        return self.table.lookup("evaluate", stance.id, answer)
