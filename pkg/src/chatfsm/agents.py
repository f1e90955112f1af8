"""The agent suite: code modification, extraction, summaries and context queries.

Each agent is one chat invocation with a fixed prompt template, stored
verbatim as a data file under ``chatfsm/prompts``. Rendering is total
and deterministic, so identical inputs always produce identical request
digests and cassettes replay exactly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .errors import EmptyReplyError
from .gateway import ChatGateway, ChatMessage
from .model import FsmDocument, parse_fsm_json

__all__ = [
    "AGENT_NAMES",
    "AgentPrompt",
    "load_prompt",
    "FsmAgents",
    "strip_code_fences",
    "extract_json_payload",
]

AGENT_NAMES = (
    "chatfsm",
    "extract_fsm",
    "summarize_changes",
    "summarize_diff",
    "get_context",
    "filter_fsm",
)

_PLACEHOLDER_RE = re.compile(r"\{(\w+)\}")


@dataclass(frozen=True)
class AgentPrompt:
    """A named template with ``{placeholder}`` slots."""

    agent_name: str
    template: str

    def placeholders(self) -> set[str]:
        return set(_PLACEHOLDER_RE.findall(self.template))

    def render(self, **values: str) -> str:
        missing = self.placeholders() - values.keys()
        if missing:
            raise KeyError(
                f"prompt {self.agent_name!r} is missing values for: {sorted(missing)}")

        def substitute(match: re.Match) -> str:
            name = match.group(1)
            return values.get(name, match.group(0))

        return _PLACEHOLDER_RE.sub(substitute, self.template)


@lru_cache(maxsize=None)
def load_prompt(agent_name: str) -> AgentPrompt:
    if agent_name not in AGENT_NAMES:
        raise KeyError(f"unknown agent {agent_name!r}")
    text = resources.files("chatfsm.prompts").joinpath(f"{agent_name}.txt").read_text(
        encoding="utf-8")
    return AgentPrompt(agent_name=agent_name, template=text.rstrip("\n"))


_FENCE_RE = re.compile(r"^```[^\n]*\n(.*)\n```\s*$", re.DOTALL)


def strip_code_fences(text: str) -> str:
    """Remove one surrounding markdown code fence, preserving the body."""
    stripped = text.strip()
    match = _FENCE_RE.match(stripped)
    if match:
        return match.group(1)
    return text


def extract_json_payload(text: str) -> str:
    """The first balanced JSON array or object embedded in ``text``.

    Models often wrap JSON in prose; this scans from the first bracket
    to its balanced closer, skipping over string literals. Returns the
    text unchanged when no bracket is found, leaving the error to the
    JSON parser.
    """
    openers = {"[": "]", "{": "}"}
    start = None
    for i, ch in enumerate(text):
        if ch in openers:
            start = i
            break
    if start is None:
        return text
    depth = 0
    in_string = False
    escaped = False
    for i in range(start, len(text)):
        ch = text[i]
        if in_string:
            if escaped:
                escaped = False
            elif ch == "\\":
                escaped = True
            elif ch == '"':
                in_string = False
            continue
        if ch == '"':
            in_string = True
        elif ch in "[{":
            depth += 1
        elif ch in "]}":
            depth -= 1
            if depth == 0:
                return text[start:i + 1]
    return text[start:]


class FsmAgents:
    """All agents bound to one gateway."""

    def __init__(self, gateway: ChatGateway):
        self.gateway = gateway

    # -- code modification -------------------------------------------------

    def render_modify_messages(self, code: str, request: str,
                               context: str | None = None) -> list[ChatMessage]:
        """The exact message list of a modification request.

        The system prompt goes first; the user turn carries the optional
        context block (already wrapped), then the requested changes, then
        the code, in that order.
        """
        if not code:
            raise ValueError("code must not be empty")
        parts = []
        if context:
            parts.append(context)
        parts.append(f"Requested Changes:\n{request}")
        parts.append(f"Finite State Machine (FSM) code:\n{code}")
        return [
            ChatMessage("system", load_prompt("chatfsm").template),
            ChatMessage("user", "\n\n".join(parts)),
        ]

    def modify_fsm(self, code: str, request: str, context: str | None = None) -> str:
        """Full-code reply of the modification agent, fences stripped."""
        result = self.gateway.chat(self.render_modify_messages(code, request, context))
        reply = strip_code_fences(result.text)
        if not reply.strip():
            raise EmptyReplyError("modification agent returned no code")
        return reply

    # -- extraction ---------------------------------------------------------

    def extract_fsm(self, code: str) -> FsmDocument:
        """Extract all FSMs in ``code`` into a parsed document."""
        if not code:
            raise ValueError("code must not be empty")
        prompt = load_prompt("extract_fsm").template
        result = self.gateway.chat([
            ChatMessage("user", f"{prompt}\n\nCode:\n{code}"),
        ])
        return parse_fsm_json(extract_json_payload(result.text))

    def filter_fsm(self, source: str) -> str:
        """Agent-side isolation of FSM-defining code, returned raw."""
        rendered = load_prompt("filter_fsm").render(code=source)
        return self.gateway.chat([ChatMessage("user", rendered)]).text

    # -- summaries and context ----------------------------------------------

    def summarize_changes(self, old_code: str, new_code: str) -> str:
        """Commit-message-style summary of the FSM changes between two files."""
        if not old_code or not new_code:
            raise ValueError("both files must be nonempty")
        rendered = load_prompt("summarize_changes").render(
            file1=old_code, file2=new_code, messages="")
        return self.gateway.chat([ChatMessage("user", rendered)]).text.strip()

    def summarize_diff(self, ground_truth_json: str, input_json: str) -> str:
        """Agent-side diff of two serialized documents, for cross-checking."""
        rendered = load_prompt("summarize_diff").render(
            file1=ground_truth_json, file2=input_json, messages="")
        return self.gateway.chat([ChatMessage("user", rendered)]).text.strip()

    def context_query(self, input_text: str) -> str:
        """Search query for the retrieval step, whitespace-trimmed."""
        if not input_text:
            raise ValueError("input must not be empty")
        rendered = load_prompt("get_context").render(input=input_text)
        return self.gateway.chat([ChatMessage("user", rendered)]).text.strip()
