import json
import threading

import pytest

from chatfsm.agents import (
    AGENT_NAMES,
    FsmAgents,
    extract_json_payload,
    load_prompt,
    strip_code_fences,
)
from chatfsm.errors import (
    AuthenticationError,
    CassetteMissError,
    EmptyReplyError,
    GatewayTimeoutError,
    TransportError,
)
from chatfsm.gateway import (
    Cassette,
    CassetteMode,
    ChatGateway,
    ChatMessage,
    LlmProviderConfig,
    request_digest,
)

from conftest import CASSETTES_DIR, MODELS, fail_on_call_transport, replay_agents


def make_gateway(tmp_path, mode, transport, model="test-model", max_retries=2):
    cassette = Cassette(tmp_path / "cassette.json", mode=mode)
    config = LlmProviderConfig(model_id=model, max_retries=max_retries)
    return ChatGateway(config, cassette, transport=transport, backoff_base=0.0)


class TestConfig:
    def test_defaults_are_deterministic(self):
        config = LlmProviderConfig()
        assert config.temperature == 0.0

    @pytest.mark.parametrize("kwargs", [
        {"request_timeout": 0},
        {"request_timeout": -1},
        {"max_retries": -1},
        {"temperature": -0.1},
        {"temperature": 2.1},
    ])
    def test_invalid_config_rejected(self, kwargs):
        with pytest.raises(ValueError):
            LlmProviderConfig(**kwargs)

    def test_empty_system_message_rejected(self):
        with pytest.raises(ValueError):
            ChatMessage("system", "")

    def test_unknown_role_rejected(self):
        with pytest.raises(ValueError):
            ChatMessage("oracle", "hello")


class TestDigest:
    def test_same_input_same_digest(self):
        messages = [ChatMessage("user", "hi")]
        assert request_digest("m", messages) == request_digest("m", messages)

    def test_model_id_changes_digest(self):
        messages = [ChatMessage("user", "hi")]
        assert request_digest("m1", messages) != request_digest("m2", messages)

    def test_content_changes_digest(self):
        assert request_digest("m", [ChatMessage("user", "a")]) != \
            request_digest("m", [ChatMessage("user", "b")])


class TestCassette:
    def test_replay_hit_returns_recorded_text(self, tmp_path):
        recording = make_gateway(tmp_path, CassetteMode.RECORD,
                                 lambda cfg, msgs: "recorded!")
        result = recording.chat([ChatMessage("user", "q")])
        assert result.text == "recorded!"

        replaying = make_gateway(tmp_path, CassetteMode.REPLAY, fail_on_call_transport)
        replayed = replaying.chat([ChatMessage("user", "q")])
        assert replayed.text == "recorded!"
        assert replayed.elapsed < 0.5

    def test_replay_miss_names_digest(self, tmp_path):
        gateway = make_gateway(tmp_path, CassetteMode.REPLAY, fail_on_call_transport)
        messages = [ChatMessage("user", "never recorded")]
        with pytest.raises(CassetteMissError) as excinfo:
            gateway.chat(messages)
        assert excinfo.value.digest == request_digest("test-model", messages)

    def test_record_then_rerun_replays_identically(self, tmp_path):
        calls = []

        def transport(cfg, msgs):
            calls.append(1)
            return f"reply-{len(calls)}"

        gateway = make_gateway(tmp_path, CassetteMode.RECORD, transport)
        first = gateway.chat([ChatMessage("user", "q")]).text
        second = gateway.chat([ChatMessage("user", "q")]).text
        assert first == second == "reply-1"
        assert len(calls) == 1

    def test_cassette_file_round_trips(self, tmp_path):
        gateway = make_gateway(tmp_path, CassetteMode.RECORD, lambda c, m: "x")
        gateway.chat([ChatMessage("user", "q")])
        data = json.loads((tmp_path / "cassette.json").read_text())
        assert data["version"] == 1
        assert list(data["entries"].values()) == ["x"]

    def test_passthrough_ignores_cassette(self, tmp_path):
        gateway = make_gateway(tmp_path, CassetteMode.PASSTHROUGH, lambda c, m: "live")
        assert gateway.chat([ChatMessage("user", "q")]).text == "live"
        assert not (tmp_path / "cassette.json").exists() or \
            json.loads((tmp_path / "cassette.json").read_text())["entries"] == {}

    def test_concurrent_records_are_serialized(self, tmp_path):
        gateway = make_gateway(tmp_path, CassetteMode.RECORD,
                               lambda c, m: m[-1].content)
        errors = []

        def worker(i):
            try:
                gateway.chat([ChatMessage("user", f"q{i}")])
            except Exception as exc:  # noqa: BLE001
                errors.append(exc)

        threads = [threading.Thread(target=worker, args=(i,)) for i in range(8)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert not errors
        entries = json.loads((tmp_path / "cassette.json").read_text())["entries"]
        assert len(entries) == 8


class TestRetry:
    def test_retries_transient_errors(self, tmp_path):
        attempts = []

        def flaky(cfg, msgs):
            attempts.append(1)
            if len(attempts) < 3:
                raise TransportError("connection reset")
            return "ok"

        gateway = make_gateway(tmp_path, CassetteMode.PASSTHROUGH, flaky)
        assert gateway.chat([ChatMessage("user", "q")]).text == "ok"
        assert len(attempts) == 3

    def test_gives_up_after_max_retries(self, tmp_path):
        def always_down(cfg, msgs):
            raise GatewayTimeoutError("timed out")

        gateway = make_gateway(tmp_path, CassetteMode.PASSTHROUGH, always_down)
        with pytest.raises(GatewayTimeoutError):
            gateway.chat([ChatMessage("user", "q")])

    def test_auth_errors_not_retried(self, tmp_path):
        attempts = []

        def rejecting(cfg, msgs):
            attempts.append(1)
            raise AuthenticationError("bad key")

        gateway = make_gateway(tmp_path, CassetteMode.PASSTHROUGH, rejecting)
        with pytest.raises(AuthenticationError):
            gateway.chat([ChatMessage("user", "q")])
        assert len(attempts) == 1


class TestPrompts:
    def test_all_agents_have_prompt_files(self):
        for name in AGENT_NAMES:
            assert load_prompt(name).template

    ANCHORS = {
        "chatfsm": [
            "You are an advanced language model specialized in finite state machines",
            "Maintain the integrity and functionality of the FSM.",
            "Respond with the entire code. Do not skip parts.",
            "Finite State Machine (FSM) code follows the Requested Changes.",
        ],
        "extract_fsm": [
            "extract all finite state machines in the code and respond with JSON",
            "put all FSMs in one JSON file",
            '"initialState": "State1"',
            '{"to": "State2", "outcome": "Event1"}',
        ],
        "summarize_changes": [
            "analyze the changes in terms of finite state machines",
            "Old File:{file1} New File:{file2}",
            "Only output the commit messages, nothing else.",
        ],
        "summarize_diff": [
            "Ground truth:{file1} Input:{file2}",
            "Only output the messages, nothing else.",
        ],
        "get_context": [
            "generate a search query to look up",
            "{input}",
        ],
    }

    @pytest.mark.parametrize("agent_name", sorted(ANCHORS))
    def test_prompt_anchor_phrases(self, agent_name):
        template = load_prompt(agent_name).template
        for anchor in self.ANCHORS[agent_name]:
            assert anchor in template

    def test_render_fails_on_missing_placeholder(self):
        prompt = load_prompt("summarize_changes")
        with pytest.raises(KeyError):
            prompt.render(file1="a")

    def test_render_is_deterministic(self):
        prompt = load_prompt("summarize_diff")
        a = prompt.render(file1="x", file2="y", messages="")
        b = prompt.render(file1="x", file2="y", messages="")
        assert a == b

    def test_extract_prompt_braces_survive_rendering(self):
        prompt = load_prompt("extract_fsm")
        assert prompt.placeholders() == set()
        assert '{"to": "State2", "outcome": "Event1"}' in prompt.render()


class TestReplyPostprocessing:
    def test_fences_stripped_inner_preserved(self):
        inner = "def x():\n    return '```not a fence```'"
        assert strip_code_fences(f"```python\n{inner}\n```") == inner
        assert strip_code_fences(f"```\n{inner}\n```\n") == inner

    def test_unfenced_reply_unchanged(self):
        assert strip_code_fences("plain code") == "plain code"

    def test_json_payload_from_prose(self):
        text = 'Sure! Here it is:\n[{"name": "M"}]\nHope that helps.'
        assert extract_json_payload(text) == '[{"name": "M"}]'

    def test_json_payload_ignores_brackets_in_strings(self):
        text = 'noise ["a]b", {"k": "v]"}] trailing'
        assert extract_json_payload(text) == '["a]b", {"k": "v]"}]'

    def test_plain_json_unchanged(self):
        assert extract_json_payload("[]") == "[]"

    def test_no_brackets_passes_through(self):
        assert extract_json_payload("no json here") == "no json here"


class RecordingAgents:
    """Agents over a scripted single-reply gateway for unit tests."""

    def __init__(self, tmp_path, reply):
        self.gateway = make_gateway(tmp_path, CassetteMode.RECORD,
                                    lambda cfg, msgs: reply)
        self.agents = FsmAgents(self.gateway)


class TestAgents:
    def test_modify_orders_context_changes_code(self, tmp_path):
        agents = FsmAgents(make_gateway(tmp_path, CassetteMode.PASSTHROUGH,
                                        lambda c, m: "new code"))
        messages = agents.render_modify_messages("CODE", "CHANGES", context="CTX")
        assert messages[0].role == "system"
        user = messages[1].content
        assert user.index("CTX") < user.index("CHANGES") < user.index("CODE")

    def test_modify_echo_round_trip(self, tmp_path):
        code = "class M(smach.StateMachine):\n    pass"

        def echoing(cfg, msgs):
            body = msgs[-1].content
            return body.split("Finite State Machine (FSM) code:\n", 1)[1]

        agents = FsmAgents(make_gateway(tmp_path, CassetteMode.PASSTHROUGH, echoing))
        assert agents.modify_fsm(code, "make no changes") == code

    def test_modify_strips_fences(self, tmp_path):
        agents = FsmAgents(make_gateway(
            tmp_path, CassetteMode.PASSTHROUGH,
            lambda c, m: "```python\nMODIFIED\n```"))
        assert agents.modify_fsm("code", "request") == "MODIFIED"

    def test_modify_empty_reply_is_protocol_error(self, tmp_path):
        agents = FsmAgents(make_gateway(tmp_path, CassetteMode.PASSTHROUGH,
                                        lambda c, m: "   \n"))
        with pytest.raises(EmptyReplyError):
            agents.modify_fsm("code", "request")

    def test_extract_empty_array_reply(self, tmp_path):
        agents = FsmAgents(make_gateway(tmp_path, CassetteMode.PASSTHROUGH,
                                        lambda c, m: "[]"))
        assert agents.extract_fsm("code").fsms == ()

    def test_extract_reply_with_prose(self, tmp_path):
        reply = 'Found one: [{"name": "M", "initialState": "A", "states": ' \
                '[{"name": "A", "transitions": []}]}] done.'
        agents = FsmAgents(make_gateway(tmp_path, CassetteMode.PASSTHROUGH,
                                        lambda c, m: reply))
        doc = agents.extract_fsm("code")
        assert doc.fsms[0].name == "M"

    def test_summarize_changes_passes_both_files(self, tmp_path):
        seen = {}

        def capturing(cfg, msgs):
            seen["text"] = msgs[-1].content
            return "No FSM changes."

        agents = FsmAgents(make_gateway(tmp_path, CassetteMode.PASSTHROUGH, capturing))
        assert agents.summarize_changes("OLD", "NEW") == "No FSM changes."
        assert "Old File:OLD New File:NEW" in seen["text"]

    def test_context_query_trimmed(self, tmp_path):
        agents = FsmAgents(make_gateway(tmp_path, CassetteMode.PASSTHROUGH,
                                        lambda c, m: "  query terms \n"))
        assert agents.context_query("input") == "query terms"


class TestReplayedFixtureAgents:
    def test_navigation_extraction(self, agents_each_model):
        from conftest import FIXTURES
        code = (FIXTURES / "navigation.py").read_text(encoding="utf-8")
        doc = agents_each_model.extract_fsm(code)
        assert len(doc.fsms) == 1
        assert len(doc.fsms[0].states) == 5

    def test_pair1_summarize_changes_reply(self, agents_each_model):
        from conftest import PAIRS_DIR
        parent = (PAIRS_DIR / "pair1" / "parent.py").read_text(encoding="utf-8")
        child = (PAIRS_DIR / "pair1" / "child.py").read_text(encoding="utf-8")
        summary = agents_each_model.summarize_changes(parent, child)
        assert "Removed state FIND_PERSON" in summary
        assert "Added state FIND_PEOPLE" in summary

    def test_pair5_summarize_diff_reply(self, agents_each_model):
        from conftest import PAIRS_DIR
        gt = (PAIRS_DIR / "pair5" / "parent_fsm.json").read_text(encoding="utf-8")
        inp = (PAIRS_DIR / "pair5" / "ground_true.json").read_text(encoding="utf-8")
        reply = agents_each_model.summarize_diff(gt, inp)
        for line in (
            "State SAY_DETECT_HANDOVER added in HandoverToHuman.",
            "State SAY_CLOSE_NOW_GRIPPER added in HandoverToHuman.",
            "Transition from MOVE_HUMAN_HANDOVER_JOINT_GOAL to SAY_DETECT_HANDOVER "
            "added in HandoverToHuman.",
            "Transition from SAY_DETECT_HANDOVER to DETECT_HANDOVER added in "
            "HandoverToHuman.",
            "Transition from DETECT_HANDOVER to SAY_CLOSE_NOW_GRIPPER added in "
            "HandoverToHuman.",
            "Transition from SAY_CLOSE_NOW_GRIPPER to CLOSE_GRIPPER_HANDOVER added "
            "in HandoverToHuman.",
        ):
            assert line in reply

    def test_pair3_query_names_the_decision_state(self, agents_each_model):
        from chatfsm.codefilter import filtered_source
        from conftest import PAIRS_DIR
        parent = (PAIRS_DIR / "pair3" / "parent.py").read_text(encoding="utf-8")
        child = (PAIRS_DIR / "pair3" / "child.py").read_text(encoding="utf-8")
        request = agents_each_model.summarize_changes(parent, child)
        query = agents_each_model.context_query(
            f"{filtered_source(parent)}\n\n{request}")
        assert "DECIDE_NAVIGATE_STATE" in query
