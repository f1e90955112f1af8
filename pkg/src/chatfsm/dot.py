"""Deterministic DOT text for FSM documents.

One digraph per FSM. A synthetic start point feeds an unlabeled edge
into the initial state, sink states are drawn double-circled, and every
transition edge is labeled with its outcome. Emission order is fixed
(nodes and edges sorted lexicographically) so output is byte-stable.

Rasterization is left to the caller's toolchain; this module only emits
and checks DOT text.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .diff import DiffKind, DiffReport, categorize
from .model import Fsm, FsmDocument, sink_states, validate_document
from .errors import FsmValidationError

__all__ = [
    "RankDirection",
    "DotOptions",
    "to_dot",
    "diff_overlay",
    "scan_dot",
    "DotSyntaxError",
]


class RankDirection(enum.Enum):
    LEFT_RIGHT = "LR"
    TOP_BOTTOM = "TB"


@dataclass(frozen=True)
class DotOptions:
    rank_direction: RankDirection = RankDirection.LEFT_RIGHT
    highlight_diff: DiffReport | None = None


def _quote(label: str) -> str:
    return '"' + label.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _start_id(fsm: Fsm) -> str:
    names = set(fsm.state_names())
    start = "__start__"
    while start in names:
        start += "_"
    return start


def _diff_sets(report: DiffReport | None, fsm_name: str):
    added_states: set[str] = set()
    removed_states: set[str] = set()
    added_edges: set[tuple[str, str, str]] = set()
    removed_edges: set[tuple[str, str, str]] = set()
    if report is not None:
        for item in report.items:
            if item.fsm != fsm_name:
                continue
            if item.kind is DiffKind.STATE_ADDED:
                added_states.add(item.state)
            elif item.kind is DiffKind.STATE_REMOVED:
                removed_states.add(item.state)
            elif item.kind is DiffKind.TRANSITION_ADDED:
                added_edges.add((item.from_state, item.to_state, item.outcome))
            elif item.kind is DiffKind.TRANSITION_REMOVED:
                removed_edges.add((item.from_state, item.to_state, item.outcome))
    return added_states, removed_states, added_edges, removed_edges


_ADDED_STYLE = "style=dashed"
_REMOVED_STYLE = "style=dotted, color=gray, fontcolor=gray"


def _fsm_to_dot(fsm: Fsm, opts: DotOptions) -> str:
    added_states, removed_states, added_edges, removed_edges = _diff_sets(
        opts.highlight_diff, fsm.name)
    sinks = sink_states(fsm)
    start = _start_id(fsm)

    lines = [f"digraph {_quote(fsm.name)} {{"]
    lines.append(f"  rankdir={opts.rank_direction.value};")
    lines.append(f"  {_quote(start)} [shape=point, label=\"\"];")

    node_names = sorted(set(fsm.state_names()) | removed_states)
    for name in node_names:
        attrs = []
        if name in sinks:
            attrs.append("shape=doublecircle")
        if name in added_states:
            attrs.append(_ADDED_STYLE)
        if name in removed_states:
            attrs.append(_REMOVED_STYLE)
        suffix = f" [{', '.join(attrs)}]" if attrs else ""
        lines.append(f"  {_quote(name)}{suffix};")

    lines.append(f"  {_quote(start)} -> {_quote(fsm.initial_state)};")
    edges = sorted(
        (node.name, tr.to, tr.outcome)
        for node in fsm.states
        for tr in node.transitions
    )
    ghost_edges = sorted(removed_edges)
    for frm, to, outcome in edges:
        attrs = [f"label={_quote(outcome)}"]
        if (frm, to, outcome) in added_edges:
            attrs.append(_ADDED_STYLE)
        lines.append(f"  {_quote(frm)} -> {_quote(to)} [{', '.join(attrs)}];")
    for frm, to, outcome in ghost_edges:
        lines.append(
            f"  {_quote(frm)} -> {_quote(to)} [label={_quote(outcome)}, {_REMOVED_STYLE}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_dot(doc: FsmDocument, opts: DotOptions | None = None) -> str:
    """DOT text for a valid document, one digraph per FSM."""
    report = validate_document(doc)
    if not report.valid:
        raise FsmValidationError(report)
    opts = opts or DotOptions()
    return "\n".join(_fsm_to_dot(fsm, opts) for fsm in doc.fsms)


def diff_overlay(ground_truth: FsmDocument, input_doc: FsmDocument,
                 rank_direction: RankDirection = RankDirection.LEFT_RIGHT) -> str:
    """DOT of the input document with differences highlighted.

    Elements added relative to the ground truth come out dashed; removed
    states and edges are ghosted into the drawing in gray.
    """
    report = categorize(ground_truth, input_doc)
    opts = DotOptions(rank_direction=rank_direction, highlight_diff=report)
    return to_dot(input_doc, opts)


class DotSyntaxError(ValueError):
    pass


_PUNCT = {"{", "}", "[", "]", "=", ";", ","}


def _tokenize(text: str) -> list[str]:
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch == '"':
            j = i + 1
            while j < n:
                if text[j] == "\\":
                    j += 2
                    continue
                if text[j] == '"':
                    break
                j += 1
            if j >= n:
                raise DotSyntaxError(f"unterminated string at {i}")
            tokens.append(text[i:j + 1])
            i = j + 1
            continue
        if text.startswith("->", i):
            tokens.append("->")
            i += 2
            continue
        if ch in _PUNCT:
            tokens.append(ch)
            i += 1
            continue
        j = i
        while j < n and (text[j].isalnum() or text[j] in "_."):
            j += 1
        if j == i:
            raise DotSyntaxError(f"unexpected character {ch!r} at {i}")
        tokens.append(text[i:j])
        i = j
    return tokens


def scan_dot(text: str) -> dict:
    """Check emitted DOT text and count its statements.

    A deliberately small recognizer for the subset this module emits:
    ``digraph <id> { <stmt>; ... }`` where a statement is an attribute
    setting, a node with an optional attribute list, or an edge. Returns
    per-graph node and edge statement counts. Raises
    :class:`DotSyntaxError` on anything else.
    """
    tokens = _tokenize(text)
    pos = 0
    graphs = []

    def expect(tok: str):
        nonlocal pos
        if pos >= len(tokens) or tokens[pos] != tok:
            found = tokens[pos] if pos < len(tokens) else "<eof>"
            raise DotSyntaxError(f"expected {tok!r}, found {found!r}")
        pos += 1

    def take_id() -> str:
        nonlocal pos
        if pos >= len(tokens):
            raise DotSyntaxError("expected identifier, found <eof>")
        tok = tokens[pos]
        if tok in _PUNCT or tok == "->" or tok == "digraph":
            raise DotSyntaxError(f"expected identifier, found {tok!r}")
        pos += 1
        return tok

    def attr_list():
        nonlocal pos
        expect("[")
        while True:
            take_id()
            expect("=")
            take_id()
            if pos < len(tokens) and tokens[pos] == ",":
                pos += 1
                continue
            break
        expect("]")

    while pos < len(tokens):
        expect("digraph")
        name = take_id()
        expect("{")
        nodes = 0
        edges = 0
        while pos < len(tokens) and tokens[pos] != "}":
            take_id()
            if pos < len(tokens) and tokens[pos] == "=":
                pos += 1
                take_id()
            elif pos < len(tokens) and tokens[pos] == "->":
                pos += 1
                take_id()
                if pos < len(tokens) and tokens[pos] == "[":
                    attr_list()
                edges += 1
            else:
                if pos < len(tokens) and tokens[pos] == "[":
                    attr_list()
                nodes += 1
            expect(";")
        expect("}")
        graphs.append({"name": name, "nodes": nodes, "edges": edges})
    if not graphs:
        raise DotSyntaxError("no digraph found")
    return {"graphs": graphs}
