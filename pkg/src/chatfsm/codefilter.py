"""Isolation of state-machine class blocks in robot source files.

Targets codebases where state machines inherit from the
``smach.StateMachine`` base class. A class block runs from its
``class`` keyword through its ``__init__`` body, up to (not including)
the next top-level ``class`` statement, an ``if __name__`` guard, or
the end of input. The dot matches newlines; an optional double-quoted
docstring may sit between the class line and ``__init__``.

For other codebases, :func:`filter_fsm_llm` delegates the same job to a
language-model agent.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

__all__ = ["CodeSpan", "FSM_CLASS_PATTERN", "filter_fsm_regex", "filter_fsm_llm", "filtered_source"]

FSM_CLASS_PATTERN = re.compile(
    r"class\s+\w+\(smach\.StateMachine\):\s*"
    r"(?:\"\"\".*?\"\"\"\s*)?\s*"
    r"def\s+__init__.*?"
    r"(?=\nclass|\nif\s+__name__|$)",
    re.DOTALL,
)


@dataclass(frozen=True)
class CodeSpan:
    """An extracted class block and its position in the source."""

    path: str
    start_byte: int
    end_byte: int
    text: str


def filter_fsm_regex(source: str, path: str = "<memory>") -> list[CodeSpan]:
    """Every non-overlapping state-machine class block, in source order.

    Offsets are byte positions of the block within the UTF-8 encoding of
    ``source``. No matches yield an empty list.
    """
    spans = []
    byte_pos = 0
    char_pos = 0
    for match in FSM_CLASS_PATTERN.finditer(source):
        byte_pos += len(source[char_pos:match.start()].encode("utf-8"))
        char_pos = match.start()
        text = match.group(0)
        start = byte_pos
        end = start + len(text.encode("utf-8"))
        spans.append(CodeSpan(path=path, start_byte=start, end_byte=end, text=text))
        byte_pos = end
        char_pos = match.end()
    return spans


def filtered_source(source: str, path: str = "<memory>") -> str:
    """The state-machine blocks of ``source`` joined by blank lines."""
    return "\n\n".join(span.text for span in filter_fsm_regex(source, path))


def filter_fsm_llm(source: str, agents) -> str:
    """Agent-backed extraction for codebases without the smach pattern.

    Returns the agent's raw reply: the state declarations, transitions
    and triggering events, with state-internal implementation dropped.
    Transport failures propagate.
    """
    return agents.filter_fsm(source)
