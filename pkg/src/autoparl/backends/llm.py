"""Chat-completion client with retries, record/replay fixtures and LLM delegates.

The wire format is the common ``POST {base}/chat/completions`` JSON exchange.
Credentials come from ``AP_API_KEY``; ``AP_API_BASE`` overrides the profile's
base URL.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Literal, Sequence

import httpx

from autoparl.backends.prompts import build_fewshot_prompt, load_template, render
from autoparl.domain import ModificationPolicy, Question, ScoredRow, StanceSpec
from autoparl.errors import ConfigurationError, ProtocolError, TransportError

log = logging.getLogger(__name__)

API_KEY_ENV = "AP_API_KEY"
API_BASE_ENV = "AP_API_BASE"
RETRYABLE_STATUS = frozenset({408, 409, 425, 429, 500, 502, 503, 504})


@dataclass(frozen=True)
class EndpointProfile:
    base_url: str = "https://api.openai.com/v1"
    model: str = "gpt-3.5-turbo"
    temperature: float = 0.0
    max_retries: int = 3
    timeout: float = 30.0
    backoff_base: float = 0.5

    def __post_init__(self):
        if self.temperature < 0:
            raise ConfigurationError("temperature must be >= 0")
        if self.max_retries < 0 or self.timeout < 0 or self.backoff_base < 0:
            raise ConfigurationError("retries, timeout and backoff must be non-negative")

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> EndpointProfile:
        known = {k: data[k] for k in cls.__dataclass_fields__ if k in data}
        try:
            return cls(**known)
        except TypeError as exc:
            raise ConfigurationError(f"bad endpoint profile: {exc}") from exc


def request_payload(profile: EndpointProfile, prompt: str) -> dict[str, Any]:
    return {
        "model": profile.model,
        "messages": [{"role": "user", "content": prompt}],
        "temperature": profile.temperature,
    }


def request_digest(payload: dict[str, Any]) -> str:
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _extract_text(response: httpx.Response) -> str:
    try:
        body = response.json()
        content = body["choices"][0]["message"]["content"]
    except (ValueError, KeyError, IndexError, TypeError) as exc:
        raise ProtocolError(f"malformed chat completion body: {response.text[:200]!r}") from exc
    if not isinstance(content, str):
        raise ProtocolError("chat completion content is not text")
    return content


def chat_complete(
    profile: EndpointProfile,
    prompt: str,
    *,
    http: httpx.Client | None = None,
    sleep: Callable[[float], None] = time.sleep,
) -> str:
    """Send one user prompt and return the assistant's text.

    Transient failures (connection errors, timeouts, 429 and 5xx) are retried
    up to ``profile.max_retries`` times with exponential backoff.
    """
    api_key = os.environ.get(API_KEY_ENV, "").strip()
    if not api_key:
        raise ConfigurationError(f"{API_KEY_ENV} is not set")
    base = (os.environ.get(API_BASE_ENV, "").strip() or profile.base_url).rstrip("/")
    url = f"{base}/chat/completions"
    payload = request_payload(profile, prompt)
    headers = {"Authorization": f"Bearer {api_key}"}

    owned = http is None
    client = http or httpx.Client(timeout=profile.timeout)
    last: str = ""
    try:
        for attempt in range(profile.max_retries + 1):
            if attempt:
                delay = profile.backoff_base * 2 ** (attempt - 1)
                log.info("retrying chat completion in %.2fs (%s)", delay, last)
                sleep(delay)
            try:
                response = client.post(url, json=payload, headers=headers, timeout=profile.timeout)
            except httpx.TransportError as exc:
                last = f"{type(exc).__name__}: {exc}"
                continue
            if response.status_code in RETRYABLE_STATUS:
                last = f"HTTP {response.status_code}"
                continue
            if response.status_code >= 400:
                raise TransportError(
                    f"chat completion failed with HTTP {response.status_code}: {response.text[:200]}"
                )
            return _extract_text(response)
    finally:
        if owned:
            client.close()
    raise TransportError(f"chat completion failed after {profile.max_retries + 1} attempts: {last}")


class ReplayStore:
    """Line-delimited JSON of ``{"digest": ..., "response": ...}`` records."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._lock = threading.Lock()
        self._responses: dict[str, str] = {}
        if self.path.exists():
            with self.path.open(encoding="utf-8") as fh:
                for line in fh:
                    if line.strip():
                        rec = json.loads(line)
                        self._responses[rec["digest"]] = rec["response"]

    def get(self, digest: str) -> str | None:
        return self._responses.get(digest)

    def put(self, digest: str, response: str) -> None:
        with self._lock:
            if digest in self._responses:
                return
            self._responses[digest] = response
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with self.path.open("a", encoding="utf-8") as fh:
                fh.write(json.dumps({"digest": digest, "response": response}, ensure_ascii=False))
                fh.write("\n")

    def __len__(self) -> int:
        return len(self._responses)


class ChatClient:
    """Callable ``prompt -> text`` over a live endpoint or a replay fixture.

    ``mode="replay"`` never touches the network and fails on unknown prompts;
    ``mode="record"`` calls the service and appends every response to the store.
    """

    def __init__(
        self,
        profile: EndpointProfile,
        mode: Literal["live", "record", "replay"] = "live",
        store: ReplayStore | None = None,
        http: httpx.Client | None = None,
        sleep: Callable[[float], None] = time.sleep,
    ):
        if mode in ("record", "replay") and store is None:
            raise ConfigurationError(f"{mode} mode needs a replay store")
        self.profile = profile
        self.mode = mode
        self.store = store
        self.http = http
        self.sleep = sleep

    def __call__(self, prompt: str) -> str:
        digest = request_digest(request_payload(self.profile, prompt))
        if self.mode == "replay":
            text = self.store.get(digest)
            if text is None:
                raise TransportError(f"no recorded response for request {digest[:12]}")
            return text
        text = chat_complete(self.profile, prompt, http=self.http, sleep=self.sleep)
        if self.mode == "record":
            self.store.put(digest, text)
        return text


class LLMBackend:
    """Generator, modifier and evaluator for one stance backed by a chat model.

    With ``training_rows`` the evaluator uses a few-shot prompt built from
    them; without, it falls back to the zero-shot single-value prompt.
    """

    def __init__(
        self,
        complete: Callable[[str], str],
        training_rows: Sequence[ScoredRow] = (),
        concurrent: bool = True,
    ):
        self.complete = complete
        self.training_rows = tuple(training_rows)
        self.concurrent = concurrent

    def generate(self, question: Question, stance: StanceSpec) -> str:
        prompt = render(load_template("generator"), stance=stance.name, question=question.text)
        return self.complete(prompt).strip()

    def modify(
        self, question: Question, stance: StanceSpec, text: str, policy: ModificationPolicy
    ) -> str:
        if policy == "amendments-only":
            prompt = render(
                load_template("modifier_amendment"),
                stance=stance.name,
                question=question.text,
                answer=text,
            )
            suffix = self.complete(prompt).rstrip()
            if suffix and not suffix[0].isspace():
                suffix = " " + suffix
            return text + suffix
        prompt = render(
            load_template("modifier"), stance=stance.name, question=question.text, answer=text
        )
        return self.complete(prompt).strip()

    def evaluate(self, question: Question, answer: str, stance: StanceSpec) -> str:
        prompt = build_fewshot_prompt(self.training_rows, stance, question.text, answer)
        return self.complete(prompt)
