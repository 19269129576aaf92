import json

import httpx
import pytest

from autoparl import Question, StanceSpec
from autoparl.backends import (
    ChatClient,
    EndpointProfile,
    LLMBackend,
    ReplayStore,
    chat_complete,
    request_digest,
    request_payload,
    run_modify,
)
from autoparl.errors import ConfigurationError, ProtocolError, TransportError

PROFILE = EndpointProfile(base_url="http://llm.test/v1", model="m", max_retries=2, backoff_base=0.0)


def ok(content="0.7"):
    return httpx.Response(
        200,
        json={"id": "1", "choices": [{"index": 0, "message": {"role": "assistant", "content": content}}]},
    )


@pytest.fixture(autouse=True)
def api_key(monkeypatch):
    monkeypatch.setenv("AP_API_KEY", "test-key")
    monkeypatch.delenv("AP_API_BASE", raising=False)


def client_for(handler):
    return httpx.Client(transport=httpx.MockTransport(handler))


def test_well_formed_response():
    seen = []

    def handler(request):
        seen.append(request)
        return ok("hello")

    assert chat_complete(PROFILE, "hi", http=client_for(handler)) == "hello"
    req = seen[0]
    assert str(req.url) == "http://llm.test/v1/chat/completions"
    assert req.headers["authorization"] == "Bearer test-key"
    body = json.loads(req.content)
    assert body == {"model": "m", "messages": [{"role": "user", "content": "hi"}], "temperature": 0.0}


def test_rate_limit_is_retried_with_backoff():
    calls = []
    sleeps = []

    def handler(request):
        calls.append(1)
        if len(calls) == 1:
            return httpx.Response(429, json={"error": {"message": "rate limited"}})
        return ok("fine")

    profile = EndpointProfile(base_url="http://llm.test/v1", max_retries=3, backoff_base=0.5)
    assert chat_complete(profile, "hi", http=client_for(handler), sleep=sleeps.append) == "fine"
    assert len(calls) == 2 and sleeps == [0.5]


def test_backoff_is_exponential_and_exhaustion_raises():
    sleeps = []
    profile = EndpointProfile(base_url="http://llm.test/v1", max_retries=3, backoff_base=1.0)
    with pytest.raises(TransportError):
        chat_complete(profile, "hi", http=client_for(lambda r: httpx.Response(503)), sleep=sleeps.append)
    assert sleeps == [1.0, 2.0, 4.0]


def test_unreachable_endpoint_is_transport_error_after_retries():
    calls = []

    def handler(request):
        calls.append(1)
        raise httpx.ConnectError("unreachable", request=request)

    with pytest.raises(TransportError):
        chat_complete(PROFILE, "hi", http=client_for(handler), sleep=lambda s: None)
    assert len(calls) == PROFILE.max_retries + 1


def test_client_error_is_not_retried():
    calls = []

    def handler(request):
        calls.append(1)
        return httpx.Response(401, json={"error": "bad key"})

    with pytest.raises(TransportError):
        chat_complete(PROFILE, "hi", http=client_for(handler))
    assert len(calls) == 1


@pytest.mark.parametrize("body", [{"choices": []}, {"nope": 1}, {"choices": [{"message": {"content": 3}}]}])
def test_malformed_body_is_protocol_error(body):
    with pytest.raises(ProtocolError):
        chat_complete(PROFILE, "hi", http=client_for(lambda r: httpx.Response(200, json=body)))


def test_non_json_body_is_protocol_error():
    with pytest.raises(ProtocolError):
        chat_complete(PROFILE, "hi", http=client_for(lambda r: httpx.Response(200, text="<html>")))


def test_missing_key_fails_before_any_request(monkeypatch):
    monkeypatch.delenv("AP_API_KEY")
    calls = []
    with pytest.raises(ConfigurationError):
        chat_complete(PROFILE, "hi", http=client_for(lambda r: calls.append(1) or ok()))
    assert calls == []


def test_base_url_override(monkeypatch):
    monkeypatch.setenv("AP_API_BASE", "http://other.test/api/")
    urls = []
    chat_complete(PROFILE, "hi", http=client_for(lambda r: urls.append(str(r.url)) or ok()))
    assert urls == ["http://other.test/api/chat/completions"]


def test_profile_validation():
    with pytest.raises(ConfigurationError):
        EndpointProfile(max_retries=-1)
    with pytest.raises(ConfigurationError):
        EndpointProfile(temperature=-0.1)


def test_record_then_replay(tmp_path, monkeypatch):
    store_path = tmp_path / "calls.jsonl"
    recorder = ChatClient(PROFILE, "record", ReplayStore(store_path), http=client_for(lambda r: ok("0.55 ok")))
    assert recorder("prompt A") == "0.55 ok"
    line = json.loads(store_path.read_text().splitlines()[0])
    assert line == {"digest": request_digest(request_payload(PROFILE, "prompt A")), "response": "0.55 ok"}

    monkeypatch.delenv("AP_API_KEY")
    replayer = ChatClient(PROFILE, "replay", ReplayStore(store_path))
    assert replayer("prompt A") == "0.55 ok"
    with pytest.raises(TransportError):
        replayer("prompt B")


def test_replay_mode_requires_store():
    with pytest.raises(ConfigurationError):
        ChatClient(PROFILE, "replay")


def test_digest_depends_on_model_and_prompt():
    a = request_digest(request_payload(PROFILE, "x"))
    assert a == request_digest(request_payload(PROFILE, "x"))
    assert a != request_digest(request_payload(PROFILE, "y"))
    assert a != request_digest(request_payload(EndpointProfile(model="other"), "x"))


def test_llm_backend_roles():
    stance = StanceSpec(1, "deontology", 1.0)
    prompts = []

    def complete(prompt):
        prompts.append(prompt)
        if "Added text:" in prompt:
            return "But duty forbids treating anyone as a mere means."
        return "0.6 because" if "score" in prompt.lower() else " Keep your promises. "

    backend = LLMBackend(complete)
    q = Question("q", "Pull the lever?")
    assert backend.generate(q, stance) == "Keep your promises."
    assert "deontology" in prompts[-1] and "Pull the lever?" in prompts[-1]
    text, subtype = run_modify(backend, q, stance, "Pull the lever.", "amendments-only")
    assert text == "Pull the lever. But duty forbids treating anyone as a mere means."
    assert subtype == "amendment"
    assert backend.evaluate(q, "ans", stance) == "0.6 because"
