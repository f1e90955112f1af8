"""Build an FSM document, validate it, and round-trip the JSON form."""

from chatfsm import (
    Fsm, FsmDocument, StateNode, Transition,
    parse_fsm_json, serialize_fsm_json, sink_states, validate_document,
)

# The classic navigation machine: drive to a room, opening the door on
# the way, with retry loops on the two flaky steps.
navigation = Fsm(
    name="RobotNavigation",
    initial_state="Idle",
    states=(
        StateNode("Idle", (Transition("Navigate", "Start Command"),)),
        StateNode("Navigate", (
            Transition("Open Door", "Reached Door"),
            Transition("Navigate", "Obstacle Detected"),
        )),
        StateNode("Open Door", (
            Transition("Enter Room", "Door Opened"),
            Transition("Open Door", "Failed to Open Door"),
        )),
        StateNode("Enter Room", (Transition("Destination", "Room Entered"),)),
        StateNode("Destination", ()),
    ),
)
doc = FsmDocument((navigation,))

report = validate_document(doc)
print("valid:", report.valid)
print("sinks:", sink_states(navigation))

text = serialize_fsm_json(doc)
print(text)

# The serialization round-trips exactly, and the legacy `condition`
# spelling of the transition key parses to the same document.
assert parse_fsm_json(text) == doc
assert parse_fsm_json(text.replace('"outcome"', '"condition"')) == doc

# A dangling transition target is reported, never thrown.
broken = FsmDocument((Fsm(
    name="Broken", initial_state="A",
    states=(StateNode("A", (Transition("GHOST", "go"),)),),
),))
for issue in validate_document(broken).issues:
    print(f"{issue.severity}: {issue.code} at {issue.location}: {issue.message}")
