import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from autoparl.backends import ChatClient, EndpointProfile, ReplayStore
from autoparl.bench import load_builtin, score_grid
from autoparl.errors import SchemaError, TransportError
from autoparl.estimator import FewShotEvaluator

from conftest import FIXTURES

PROFILE = EndpointProfile(base_url="http://replay.invalid/v1", model="claude-2", temperature=0.0)


@pytest.fixture(scope="module")
def replay():
    return ChatClient(PROFILE, "replay", ReplayStore(FIXTURES / "replay_claude_amp.jsonl"))


def test_params_round_trip():
    est = FewShotEvaluator(mode="single-value", stances=("a", "b"))
    assert est.get_params() == {"complete": None, "stances": ("a", "b"), "mode": "single-value"}
    twin = clone(est)
    assert twin is not est and twin.get_params() == est.get_params()


def test_predict_before_fit():
    with pytest.raises(NotFittedError):
        FewShotEvaluator(lambda p: "0.5").predict([("Q?", "A.")])


def test_replayed_few_shot_pipeline(replay):
    train = load_builtin("fewshot_train")
    test = load_builtin("fewshot_test")
    est = FewShotEvaluator(replay).fit(train)
    assert est.score(test) == pytest.approx(-2.98, abs=0.01)
    np.testing.assert_allclose(est.predict(test), score_grid(load_builtin("claude_amp")))


def test_replay_miss_is_transport_error(replay):
    est = FewShotEvaluator(replay).fit(load_builtin("fewshot_train")[:3])
    with pytest.raises(TransportError):
        est.predict(load_builtin("fewshot_test")[:1])


def test_single_value_mode_broadcasts():
    prompts = []
    est = FewShotEvaluator(lambda p: prompts.append(p) or "0.4", mode="single-value")
    est.fit(load_builtin("fewshot_train"))
    assert est.training_rows_ == ()
    out = est.predict([("Q1?", "A1."), ("Q2?", "A2.")])
    assert out.tolist() == [[0.4, 0.4, 0.4]] * 2
    assert len(prompts) == 2 and "Question: Q1?" in prompts[0]


def test_predict_rows_keeps_pairs():
    est = FewShotEvaluator(lambda p: "1").fit([])
    rows = est.predict_rows([("Q?", "A.")])
    assert rows[0].question == "Q?" and rows[0].scores == {
        "deontology": 1.0, "utilitarianism": 1.0, "virtue ethics": 1.0}


def test_fit_checks_columns():
    with pytest.raises(SchemaError):
        FewShotEvaluator(stances=("deontology", "care")).fit(load_builtin("fewshot_train"))
