from pathlib import Path

import pytest

from chatfsm.agents import FsmAgents
from chatfsm.gateway import Cassette, CassetteMode, ChatGateway, LlmProviderConfig

REPO = Path(__file__).resolve().parent.parent
FIXTURES = REPO / "fixtures"
PAIRS_DIR = FIXTURES / "pairs"
CASSETTES_DIR = FIXTURES / "cassettes"

MODELS = ("gpt-4o-2024-05-13", "llama-3.1-70b-versatile")


def fail_on_call_transport(config, messages):
    raise AssertionError("live transport used during replay")


def replay_gateway(model_id: str) -> ChatGateway:
    cassette = Cassette(CASSETTES_DIR / f"{model_id}.json", mode=CassetteMode.REPLAY)
    config = LlmProviderConfig(model_id=model_id)
    return ChatGateway(config, cassette, transport=fail_on_call_transport)


def replay_agents(model_id: str) -> FsmAgents:
    return FsmAgents(replay_gateway(model_id))


@pytest.fixture
def agents_gpt() -> FsmAgents:
    return replay_agents(MODELS[0])


@pytest.fixture(params=MODELS)
def agents_each_model(request) -> FsmAgents:
    return replay_agents(request.param)


@pytest.fixture
def pairs_dir() -> Path:
    return PAIRS_DIR


def pytest_runtest_logreport(report):
    """One pass/fail line per acceptance criterion."""
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        status = "PASS" if report.passed else "FAIL"
        criterion = report.nodeid.split("::")[-1]
        print(f"acceptance {status}: {criterion}", flush=True)
