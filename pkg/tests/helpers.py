"""Small constructors shared across test modules."""

from chatfsm.model import Fsm, FsmDocument, StateNode, Transition


def make_fsm(name: str, initial: str, states: list[tuple[str, list[tuple[str, str]]]],
             description: str | None = None) -> Fsm:
    """Build an FSM from (state, [(outcome, target), ...]) rows."""
    return Fsm(
        name=name,
        initial_state=initial,
        description=description,
        states=tuple(
            StateNode(
                name=state_name,
                transitions=tuple(Transition(to=target, outcome=outcome)
                                  for outcome, target in transitions),
            )
            for state_name, transitions in states
        ),
    )


def make_doc(*fsms: Fsm) -> FsmDocument:
    return FsmDocument(fsms=tuple(fsms))


def navigation_fsm() -> Fsm:
    """The five-state robot navigation machine with two self-loops."""
    return make_fsm("RobotNavigation", "Idle", [
        ("Idle", [("Start Command", "Navigate")]),
        ("Navigate", [("Reached Door", "Open Door"),
                      ("Obstacle Detected", "Navigate")]),
        ("Open Door", [("Door Opened", "Enter Room"),
                       ("Failed to Open Door", "Open Door")]),
        ("Enter Room", [("Room Entered", "Destination")]),
        ("Destination", []),
    ])
