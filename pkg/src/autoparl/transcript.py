"""Transcript serialization: one JSON document per session."""

from __future__ import annotations

import json
from pathlib import Path

from autoparl.domain import SessionTranscript


def transcript_json(transcript: SessionTranscript) -> str:
    return json.dumps(transcript.to_dict(), indent=2, ensure_ascii=False) + "\n"


def write_transcript(transcript: SessionTranscript, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(transcript_json(transcript), encoding="utf-8")
    return path
