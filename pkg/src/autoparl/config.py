"""Run configuration files: parliament settings plus backend bindings.

Example (paths are relative to the config file)::

    {
      "schema_version": 1,
      "threshold": 0.5,
      "judge": {"mode": "argmax", "seed": 7},
      "modification_policy": "any-changes",
      "stances": [
        {"id": 1, "name": "deontology", "weight": "1/2",
         "generator": {"scripted": "table.json"},
         "modifier": {"scripted": "table.json"},
         "evaluator": {"llm": {"model": "gpt-4o-mini"}, "mode": "replay",
                       "replay": "calls.jsonl", "training": "fewshot_train"}}
      ]
    }
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from autoparl.backends.base import BackendBinding
from autoparl.backends.llm import ChatClient, EndpointProfile, LLMBackend, ReplayStore
from autoparl.backends.scripted import ScriptedBackend, ScriptedTable
from autoparl.bench.datasets import BUILTIN, load_builtin, load_dataset
from autoparl.domain import ParliamentConfig
from autoparl.errors import InvalidParliamentError

SCHEMA_VERSION = 1
ROLES = ("generator", "modifier", "evaluator")


class _Loader:
    def __init__(self, base: Path):
        self.base = base
        self.tables: dict[Path, ScriptedBackend] = {}
        self.stores: dict[Path, ReplayStore] = {}

    def path(self, ref: str, must_exist: bool = True) -> Path:
        p = Path(ref)
        if not p.is_absolute():
            p = self.base / p
        if must_exist and not p.exists():
            raise InvalidParliamentError(f"referenced file does not exist: {p}")
        return p

    def source(self, spec: Any, where: str):
        if not isinstance(spec, dict):
            raise InvalidParliamentError(f"{where}: backend source must be an object")
        if "scripted" in spec:
            p = self.path(spec["scripted"]).resolve()
            if p not in self.tables:
                self.tables[p] = ScriptedBackend(ScriptedTable.from_json(p))
            return self.tables[p]
        if "llm" in spec:
            profile = EndpointProfile.from_dict(spec["llm"] or {})
            mode = spec.get("mode", "live")
            if mode not in ("live", "record", "replay"):
                raise InvalidParliamentError(f"{where}: unknown llm mode {mode!r}")
            store = None
            if "replay" in spec:
                p = self.path(spec["replay"], must_exist=(mode == "replay")).resolve()
                store = self.stores.setdefault(p, ReplayStore(p))
            client = ChatClient(profile, mode=mode, store=store)
            training = spec.get("training")
            rows = ()
            if training:
                rows = load_builtin(training) if training in BUILTIN else load_dataset(self.path(training))
            return LLMBackend(client, rows, concurrent=spec.get("concurrent", True))
        raise InvalidParliamentError(f"{where}: backend source needs 'scripted' or 'llm'")


def load_run_config(path: str | Path) -> tuple[ParliamentConfig, dict[int, BackendBinding]]:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise InvalidParliamentError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidParliamentError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise InvalidParliamentError(f"{path}: top level must be an object")
    if data.get("schema_version") != SCHEMA_VERSION:
        raise InvalidParliamentError(
            f"{path}: schema_version must be {SCHEMA_VERSION}, got {data.get('schema_version')!r}"
        )
    config = ParliamentConfig.from_dict(data)
    loader = _Loader(path.parent)
    bindings = {}
    for raw in data["stances"]:
        sid = int(raw["id"])
        missing = [r for r in ROLES if r not in raw]
        if missing:
            raise InvalidParliamentError(f"stance {sid} has no {', '.join(missing)} binding")
        roles = {r: loader.source(raw[r], f"stance {sid} {r}") for r in ROLES}
        bindings[sid] = BackendBinding(sid, **roles)
    return config, bindings
