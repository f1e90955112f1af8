"""FSM domain model, validation and the JSON interchange format.

An FSM is a labeled directed graph: states carry unique labels, every
state maps each of its outcome labels to exactly one successor state,
execution starts in the initial state and ends in sink states (states
with no outgoing transitions).

The interchange format is a JSON array of FSM objects::

    [
      {
        "name": "FSM1",
        "description": "...",
        "initialState": "State1",
        "states": [
          {
            "name": "State1",
            "description": "...",
            "transitions": [
              {"to": "State2", "outcome": "Event1"}
            ]
          }
        ]
      }
    ]

``outcome`` is the canonical transition key; the legacy alias
``condition`` is accepted on input only.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import FsmParseError, FsmSchemaError, FsmValidationError

__all__ = [
    "Transition",
    "StateNode",
    "Fsm",
    "FsmDocument",
    "ValidationIssue",
    "ValidationReport",
    "validate_document",
    "parse_fsm_json",
    "serialize_fsm_json",
    "sink_states",
]


@dataclass(frozen=True)
class Transition:
    """One outgoing edge of a state: outcome label and target state label."""

    to: str
    outcome: str


@dataclass(frozen=True)
class StateNode:
    """A named state with an ordered list of outcome-labeled transitions."""

    name: str
    transitions: tuple[Transition, ...] = ()
    description: str | None = None


@dataclass(frozen=True)
class Fsm:
    """A named state machine with an initial state and ordered states."""

    name: str
    initial_state: str
    states: tuple[StateNode, ...] = ()
    description: str | None = None

    def state(self, name: str) -> StateNode:
        for node in self.states:
            if node.name == name:
                return node
        raise KeyError(name)

    def state_names(self) -> list[str]:
        return [node.name for node in self.states]


@dataclass(frozen=True)
class FsmDocument:
    """An ordered collection of FSMs, the unit of the interchange format."""

    fsms: tuple[Fsm, ...] = ()


@dataclass(frozen=True)
class ValidationIssue:
    severity: str  # "error" or "warning"
    code: str
    message: str
    location: str


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    issues: tuple[ValidationIssue, ...] = ()

    def errors(self) -> list[ValidationIssue]:
        return [issue for issue in self.issues if issue.severity == "error"]

    def warnings(self) -> list[ValidationIssue]:
        return [issue for issue in self.issues if issue.severity == "warning"]


def validate_document(doc: FsmDocument) -> ValidationReport:
    """Check every structural invariant of a document.

    Problems are reported, never raised. Issues are ordered by FSM index,
    then state index, then issue code, so reports are deterministic.
    ``valid`` is true iff no issue has severity ``error``.
    """
    collected: list[tuple[int, int, str, ValidationIssue]] = []

    def add(fsm_idx: int, state_idx: int, severity: str, code: str, message: str, location: str):
        collected.append((fsm_idx, state_idx, code, ValidationIssue(severity, code, message, location)))

    seen_fsm_names: set[str] = set()
    for fi, fsm in enumerate(doc.fsms):
        loc = f"fsms[{fi}]"
        if not fsm.name.strip():
            add(fi, -1, "error", "empty_fsm_name", "FSM has an empty name", loc)
        if fsm.name in seen_fsm_names:
            add(fi, -1, "error", "duplicate_fsm_name",
                f"FSM name {fsm.name!r} is declared more than once", loc)
        seen_fsm_names.add(fsm.name)

        declared = {node.name for node in fsm.states}
        if fsm.initial_state not in declared:
            add(fi, -1, "error", "unknown_initial_state",
                f"initial state {fsm.initial_state!r} is not a declared state", loc)

        seen_states: set[str] = set()
        any_sink = False
        for si, node in enumerate(fsm.states):
            sloc = f"{loc}.states[{si}]"
            if not node.name.strip():
                add(fi, si, "error", "empty_state_name", "state has an empty name", sloc)
            if node.name in seen_states:
                add(fi, si, "error", "duplicate_state_name",
                    f"state {node.name!r} is declared more than once", sloc)
            seen_states.add(node.name)
            if not node.transitions:
                any_sink = True
            seen_outcomes: set[str] = set()
            for ti, tr in enumerate(node.transitions):
                tloc = f"{sloc}.transitions[{ti}]"
                if not tr.outcome:
                    add(fi, si, "error", "empty_outcome", "transition has an empty outcome", tloc)
                if tr.outcome in seen_outcomes:
                    add(fi, si, "error", "duplicate_outcome",
                        f"state {node.name!r} maps outcome {tr.outcome!r} more than once", tloc)
                seen_outcomes.add(tr.outcome)
                if tr.to not in declared:
                    add(fi, si, "error", "dangling_transition_target",
                        f"transition targets undeclared state {tr.to!r}", tloc)
        if fsm.states and not any_sink:
            add(fi, len(fsm.states), "warning", "no_sink_states",
                f"FSM {fsm.name!r} has no sink state; it never terminates", loc)

    collected.sort(key=lambda item: (item[0], item[1], item[2]))
    issues = tuple(item[3] for item in collected)
    valid = all(issue.severity != "error" for issue in issues)
    return ValidationReport(valid=valid, issues=issues)


def _require(obj: dict, key: str, path: str):
    if key not in obj:
        raise FsmSchemaError(f"missing required key {key!r}", path)
    return obj[key]


def _parse_transition(obj, path: str) -> Transition:
    if not isinstance(obj, dict):
        raise FsmSchemaError("transition must be an object", path)
    to = _require(obj, "to", path)
    if not isinstance(to, str):
        raise FsmSchemaError("'to' must be a string", path)
    has_outcome = "outcome" in obj
    has_condition = "condition" in obj
    if has_outcome and has_condition:
        raise FsmSchemaError("transition carries both 'outcome' and 'condition'", path)
    if not has_outcome and not has_condition:
        raise FsmSchemaError("missing required key 'outcome'", path)
    outcome = obj["outcome"] if has_outcome else obj["condition"]
    if not isinstance(outcome, str):
        raise FsmSchemaError("'outcome' must be a string", path)
    return Transition(to=to, outcome=outcome)


def _parse_state(obj, path: str) -> StateNode:
    if not isinstance(obj, dict):
        raise FsmSchemaError("state must be an object", path)
    name = _require(obj, "name", path)
    if not isinstance(name, str):
        raise FsmSchemaError("'name' must be a string", path)
    description = obj.get("description")
    if description is not None and not isinstance(description, str):
        raise FsmSchemaError("'description' must be a string", path)
    raw = obj.get("transitions", [])
    if not isinstance(raw, list):
        raise FsmSchemaError("'transitions' must be an array", path)
    transitions = tuple(
        _parse_transition(tr, f"{path}.transitions[{i}]") for i, tr in enumerate(raw)
    )
    return StateNode(name=name, transitions=transitions, description=description)


def _parse_fsm(obj, path: str) -> Fsm:
    if not isinstance(obj, dict):
        raise FsmSchemaError("FSM must be an object", path)
    name = _require(obj, "name", path)
    if not isinstance(name, str):
        raise FsmSchemaError("'name' must be a string", path)
    initial = _require(obj, "initialState", path)
    if not isinstance(initial, str):
        raise FsmSchemaError("'initialState' must be a string", path)
    description = obj.get("description")
    if description is not None and not isinstance(description, str):
        raise FsmSchemaError("'description' must be a string", path)
    raw = _require(obj, "states", path)
    if not isinstance(raw, list):
        raise FsmSchemaError("'states' must be an array", path)
    states = tuple(_parse_state(st, f"{path}.states[{i}]") for i, st in enumerate(raw))
    seen: set[str] = set()
    for i, node in enumerate(states):
        if node.name in seen:
            raise FsmSchemaError(
                f"duplicate state name {node.name!r}", f"{path}.states[{i}]"
            )
        seen.add(node.name)
    return Fsm(name=name, initial_state=initial, states=states, description=description)


def parse_fsm_json(text: str) -> FsmDocument:
    """Parse interchange JSON into a document.

    Accepts both the canonical ``outcome`` transition key and the legacy
    alias ``condition``. Declaration order of FSMs, states and transitions
    is preserved. Duplicate state names within an FSM are a hard error;
    all other semantic problems are left to :func:`validate_document`.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FsmParseError(f"malformed JSON: {exc.msg}", exc.lineno, exc.colno) from exc
    if not isinstance(data, list):
        raise FsmSchemaError("top level must be an array of FSM objects", "$")
    fsms = tuple(_parse_fsm(obj, f"$[{i}]") for i, obj in enumerate(data))
    return FsmDocument(fsms=fsms)


def _transition_obj(tr: Transition) -> dict:
    return {"to": tr.to, "outcome": tr.outcome}


def _state_obj(node: StateNode) -> dict:
    obj: dict = {"name": node.name}
    if node.description is not None:
        obj["description"] = node.description
    obj["transitions"] = [_transition_obj(tr) for tr in node.transitions]
    return obj


def _fsm_obj(fsm: Fsm) -> dict:
    obj: dict = {"name": fsm.name}
    if fsm.description is not None:
        obj["description"] = fsm.description
    obj["initialState"] = fsm.initial_state
    obj["states"] = [_state_obj(node) for node in fsm.states]
    return obj


def serialize_fsm_json(doc: FsmDocument) -> str:
    """Serialize a valid document to canonical interchange JSON.

    Output is byte-deterministic: two-space indentation, ``outcome`` keys,
    fields in declaration order, a single trailing newline. Refuses
    documents that fail validation.
    """
    report = validate_document(doc)
    if not report.valid:
        raise FsmValidationError(report)
    payload = [_fsm_obj(fsm) for fsm in doc.fsms]
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


def sink_states(fsm: Fsm) -> set[str]:
    """Names of the states with no outgoing transitions."""
    return {node.name for node in fsm.states if not node.transitions}


def document_to_obj(doc: FsmDocument) -> list:
    """The document as plain JSON-ready objects (canonical key order)."""
    return [_fsm_obj(fsm) for fsm in doc.fsms]
