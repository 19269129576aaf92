from autoparl.backends.base import (
    BackendBinding,
    Evaluator,
    Generator,
    Modifier,
    amend,
    bind,
    classify_modification,
    run_evaluate,
    run_generate,
    run_modify,
)
from autoparl.backends.llm import (
    ChatClient,
    EndpointProfile,
    LLMBackend,
    ReplayStore,
    chat_complete,
    request_digest,
    request_payload,
)
from autoparl.backends.prompts import build_fewshot_prompt, load_template, render
from autoparl.backends.scoring import ScoreClampWarning, extract_score, parse_score
from autoparl.backends.scripted import ScriptedBackend, ScriptedTable

__all__ = [
    "BackendBinding",
    "ChatClient",
    "EndpointProfile",
    "Evaluator",
    "Generator",
    "LLMBackend",
    "Modifier",
    "ReplayStore",
    "ScoreClampWarning",
    "ScriptedBackend",
    "ScriptedTable",
    "amend",
    "bind",
    "build_fewshot_prompt",
    "chat_complete",
    "classify_modification",
    "extract_score",
    "load_template",
    "parse_score",
    "render",
    "request_digest",
    "request_payload",
    "run_evaluate",
    "run_generate",
    "run_modify",
]
