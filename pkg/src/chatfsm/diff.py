"""Structural comparison of FSM documents by unique labels.

Two documents are compared by pairing FSMs by name, states by label and
transitions by their (from, to, outcome) triple. Unmatched edges that
share endpoints pair up as outcome changes. The result is classified
three ways: no difference (label-identical), small difference (identical
up to a relabeling of states and outcomes) or difference (no relabeling
reconciles them).

Direction convention: the first argument is the ground truth, the second
the input under test. "Added" means present in the input only, "removed"
means present in the ground truth only.
"""

from __future__ import annotations

import enum
from collections import Counter, defaultdict
from dataclasses import dataclass

from .model import Fsm, FsmDocument, Transition, StateNode, sink_states

__all__ = [
    "DiffKind",
    "DiffItem",
    "DiffCategory",
    "Renaming",
    "DiffReport",
    "structural_diff",
    "find_renaming",
    "apply_renaming",
    "categorize",
    "render_messages",
    "report_to_obj",
]

# Caps for the exact renaming search. Desk-scale machines stay far below
# both; beyond them we give up and classify as a structural difference.
MAX_RENAMING_STATES = 64
MAX_RENAMING_NODES = 10_000_000


class DiffKind(enum.Enum):
    FSM_ADDED = "fsm_added"
    FSM_REMOVED = "fsm_removed"
    STATE_ADDED = "state_added"
    STATE_REMOVED = "state_removed"
    TRANSITION_ADDED = "transition_added"
    TRANSITION_REMOVED = "transition_removed"
    OUTCOME_CHANGED = "outcome_changed"
    INITIAL_STATE_CHANGED = "initial_state_changed"


_KIND_ORDER = {kind: i for i, kind in enumerate(DiffKind)}


@dataclass(frozen=True)
class DiffItem:
    """One elementary difference between two documents."""

    kind: DiffKind
    fsm: str
    state: str | None = None
    from_state: str | None = None
    to_state: str | None = None
    outcome: str | None = None
    old_outcome: str | None = None
    new_outcome: str | None = None

    def sort_key(self):
        return (
            self.fsm,
            _KIND_ORDER[self.kind],
            self.state or "",
            self.from_state or "",
            self.to_state or "",
            self.outcome or "",
            self.old_outcome or "",
            self.new_outcome or "",
        )


class DiffCategory(enum.Enum):
    NO_DIFFERENCE = "no_difference"
    SMALL_DIFFERENCE = "small_difference"
    DIFFERENCE = "difference"


@dataclass(frozen=True)
class Renaming:
    """A relabeling that turns one FSM into another.

    ``states`` maps input state labels to ground-truth state labels;
    ``outcomes`` maps, per input state, input outcome labels to
    ground-truth outcome labels.
    """

    states: dict[str, str]
    outcomes: dict[str, dict[str, str]]

    def is_identity(self) -> bool:
        if any(k != v for k, v in self.states.items()):
            return False
        return all(k == v for per in self.outcomes.values() for k, v in per.items())


@dataclass(frozen=True)
class DiffReport:
    """Diff items plus the three-way classification.

    ``renaming`` is present exactly when the category is a small
    difference; it maps each FSM name to the witnessing relabeling.
    """

    items: tuple[DiffItem, ...]
    category: DiffCategory
    renaming: dict[str, Renaming] | None = None
    warnings: tuple[str, ...] = ()


def _edges(fsm: Fsm) -> list[tuple[str, str, str]]:
    return [
        (node.name, tr.to, tr.outcome)
        for node in fsm.states
        for tr in node.transitions
    ]


def _diff_fsm_pair(a: Fsm, b: Fsm) -> list[DiffItem]:
    items: list[DiffItem] = []
    name = a.name

    a_states = set(a.state_names())
    b_states = set(b.state_names())
    for s in b_states - a_states:
        items.append(DiffItem(DiffKind.STATE_ADDED, name, state=s))
    for s in a_states - b_states:
        items.append(DiffItem(DiffKind.STATE_REMOVED, name, state=s))

    if a.initial_state != b.initial_state:
        items.append(DiffItem(
            DiffKind.INITIAL_STATE_CHANGED, name,
            old_outcome=a.initial_state, new_outcome=b.initial_state,
        ))

    a_edges = Counter(_edges(a))
    b_edges = Counter(_edges(b))
    common = a_edges & b_edges
    a_rest = a_edges - common
    b_rest = b_edges - common

    # Unmatched edges sharing endpoints pair up as outcome changes, in
    # sorted outcome order so pairing is deterministic.
    a_by_ends: dict[tuple[str, str], list[str]] = defaultdict(list)
    b_by_ends: dict[tuple[str, str], list[str]] = defaultdict(list)
    for (frm, to, outcome), n in sorted(a_rest.items()):
        a_by_ends[(frm, to)].extend([outcome] * n)
    for (frm, to, outcome), n in sorted(b_rest.items()):
        b_by_ends[(frm, to)].extend([outcome] * n)

    for ends in sorted(set(a_by_ends) | set(b_by_ends)):
        frm, to = ends
        olds = a_by_ends.get(ends, [])
        news = b_by_ends.get(ends, [])
        for old, new in zip(olds, news):
            items.append(DiffItem(
                DiffKind.OUTCOME_CHANGED, name, state=frm,
                from_state=frm, to_state=to,
                old_outcome=old, new_outcome=new,
            ))
        for outcome in olds[len(news):]:
            items.append(DiffItem(
                DiffKind.TRANSITION_REMOVED, name,
                from_state=frm, to_state=to, outcome=outcome,
            ))
        for outcome in news[len(olds):]:
            items.append(DiffItem(
                DiffKind.TRANSITION_ADDED, name,
                from_state=frm, to_state=to, outcome=outcome,
            ))
    return items


def structural_diff(ground_truth: FsmDocument, input_doc: FsmDocument) -> list[DiffItem]:
    """All elementary differences between two documents.

    FSMs are paired by name; an unpaired FSM yields a single added or
    removed item. Items come back in a deterministic order: FSM name,
    then kind, then labels.
    """
    items: list[DiffItem] = []
    a_by_name = {fsm.name: fsm for fsm in ground_truth.fsms}
    b_by_name = {fsm.name: fsm for fsm in input_doc.fsms}

    for name in b_by_name.keys() - a_by_name.keys():
        items.append(DiffItem(DiffKind.FSM_ADDED, name))
    for name in a_by_name.keys() - b_by_name.keys():
        items.append(DiffItem(DiffKind.FSM_REMOVED, name))
    for name in a_by_name.keys() & b_by_name.keys():
        items.extend(_diff_fsm_pair(a_by_name[name], b_by_name[name]))

    items.sort(key=DiffItem.sort_key)
    return items


class _SearchBudgetExceeded(Exception):
    pass


def _multiplicities(fsm: Fsm) -> dict[str, Counter]:
    """Per state, how many edges go to each target."""
    out: dict[str, Counter] = {node.name: Counter() for node in fsm.states}
    for frm, to, _ in _edges(fsm):
        out[frm][to] += 1
    return out


def _in_multiplicities(fsm: Fsm) -> dict[str, Counter]:
    inc: dict[str, Counter] = {node.name: Counter() for node in fsm.states}
    for frm, to, _ in _edges(fsm):
        inc[to][frm] += 1
    return inc


def _signature(name: str, fsm: Fsm, out: dict[str, Counter], inc: dict[str, Counter],
               sinks: set[str]) -> tuple:
    out_counts = tuple(sorted(out[name].values()))
    in_counts = tuple(sorted(inc[name].values()))
    return (
        name == fsm.initial_state,
        name in sinks,
        sum(out[name].values()),
        sum(inc[name].values()),
        out_counts,
        in_counts,
    )


def _find_state_bijection(a: Fsm, b: Fsm, max_nodes: int) -> dict[str, str] | None:
    """Exact backtracking search for a structure-preserving state mapping.

    Maps b-state labels to a-state labels such that the initial state,
    the sink set and all edge multiplicities are preserved. Raises
    ``_SearchBudgetExceeded`` past ``max_nodes`` assignments.
    """
    a_names = a.state_names()
    b_names = b.state_names()
    if len(a_names) != len(b_names):
        return None
    a_out, a_in = _multiplicities(a), _in_multiplicities(a)
    b_out, b_in = _multiplicities(b), _in_multiplicities(b)
    if sorted(sum(c.values()) for c in a_out.values()) != \
       sorted(sum(c.values()) for c in b_out.values()):
        return None
    a_sinks, b_sinks = sink_states(a), sink_states(b)
    if len(a_sinks) != len(b_sinks):
        return None

    a_sigs = {s: _signature(s, a, a_out, a_in, a_sinks) for s in a_names}
    b_sigs = {s: _signature(s, b, b_out, b_in, b_sinks) for s in b_names}
    if sorted(a_sigs.values()) != sorted(b_sigs.values()):
        return None

    candidates = {
        bs: sorted(s for s in a_names if a_sigs[s] == b_sigs[bs])
        for bs in b_names
    }
    # Most-constrained-first keeps the tree narrow; the initial state is
    # pinned by its signature already.
    order = sorted(b_names, key=lambda s: (len(candidates[s]), s))

    mapping: dict[str, str] = {}
    used: set[str] = set()
    nodes = 0

    def consistent(bs: str, as_: str) -> bool:
        for nb, count in b_out[bs].items():
            if nb in mapping and a_out[as_].get(mapping[nb], 0) != count:
                return False
        for nb, count in b_in[bs].items():
            if nb in mapping and a_in[as_].get(mapping[nb], 0) != count:
                return False
        for mb, ma in mapping.items():
            if b_out[mb].get(bs, 0) != a_out[ma].get(as_, 0):
                return False
            if b_in[mb].get(bs, 0) != a_in[ma].get(as_, 0):
                return False
        return True

    def backtrack(idx: int) -> bool:
        nonlocal nodes
        if idx == len(order):
            return True
        bs = order[idx]
        for as_ in candidates[bs]:
            if as_ in used:
                continue
            nodes += 1
            if nodes > max_nodes:
                raise _SearchBudgetExceeded
            if not consistent(bs, as_):
                continue
            mapping[bs] = as_
            used.add(as_)
            if backtrack(idx + 1):
                return True
            del mapping[bs]
            used.discard(as_)
        return False

    if backtrack(0):
        return dict(mapping)
    return None


def _outcome_maps(a: Fsm, b: Fsm, state_map: dict[str, str]) -> dict[str, dict[str, str]]:
    """Per-state outcome relabeling induced by a state bijection.

    For each mapped state pair, outcomes are matched within groups that
    share the (mapped) target, in sorted label order.
    """
    maps: dict[str, dict[str, str]] = {}
    for b_node in b.states:
        a_node = a.state(state_map[b_node.name])
        a_by_target: dict[str, list[str]] = defaultdict(list)
        for tr in a_node.transitions:
            a_by_target[tr.to].append(tr.outcome)
        for group in a_by_target.values():
            group.sort()
        per: dict[str, str] = {}
        b_by_target: dict[str, list[str]] = defaultdict(list)
        for tr in b_node.transitions:
            b_by_target[tr.to].append(tr.outcome)
        for b_target, b_outcomes in b_by_target.items():
            a_outcomes = a_by_target[state_map[b_target]]
            for b_outcome, a_outcome in zip(sorted(b_outcomes), a_outcomes):
                per[b_outcome] = a_outcome
        maps[b_node.name] = per
    return maps


def find_renaming(a: Fsm, b: Fsm, *, max_states: int = MAX_RENAMING_STATES,
                  max_nodes: int = MAX_RENAMING_NODES) -> Renaming | None:
    """A relabeling of ``b`` that makes it label-identical to ``a``.

    Returns a bijection over state labels plus per-state bijections over
    outcome labels, or ``None`` when none exists or the search caps are
    exceeded. The search is exact for machines within the caps.
    """
    renaming, _ = _find_renaming_capped(a, b, max_states=max_states, max_nodes=max_nodes)
    return renaming


def _find_renaming_capped(a: Fsm, b: Fsm, *, max_states: int,
                          max_nodes: int) -> tuple[Renaming | None, bool]:
    if len(a.states) > max_states or len(b.states) > max_states:
        return None, True
    try:
        state_map = _find_state_bijection(a, b, max_nodes)
    except _SearchBudgetExceeded:
        return None, True
    if state_map is None:
        return None, False
    return Renaming(states=state_map, outcomes=_outcome_maps(a, b, state_map)), False


def apply_renaming(b: Fsm, renaming: Renaming) -> Fsm:
    """Rewrite ``b`` with the relabeling, preserving declaration order."""
    states = []
    for node in b.states:
        per = renaming.outcomes.get(node.name, {})
        transitions = tuple(
            Transition(to=renaming.states.get(tr.to, tr.to),
                       outcome=per.get(tr.outcome, tr.outcome))
            for tr in node.transitions
        )
        states.append(StateNode(
            name=renaming.states.get(node.name, node.name),
            transitions=transitions,
            description=node.description,
        ))
    return Fsm(name=b.name, initial_state=renaming.states.get(b.initial_state, b.initial_state),
               states=tuple(states), description=b.description)


def categorize(ground_truth: FsmDocument, input_doc: FsmDocument) -> DiffReport:
    """Classify the difference between two documents.

    No difference when the label-matching diff is empty. Small difference
    when FSMs pair up completely by name and every pair admits a
    relabeling onto its counterpart. Difference otherwise.
    """
    items = tuple(structural_diff(ground_truth, input_doc))
    if not items:
        return DiffReport(items=items, category=DiffCategory.NO_DIFFERENCE)

    a_by_name = {fsm.name: fsm for fsm in ground_truth.fsms}
    b_by_name = {fsm.name: fsm for fsm in input_doc.fsms}
    if set(a_by_name) != set(b_by_name):
        return DiffReport(items=items, category=DiffCategory.DIFFERENCE)

    warnings: list[str] = []
    witness: dict[str, Renaming] = {}
    for name in sorted(a_by_name):
        renaming, gave_up = _find_renaming_capped(
            a_by_name[name], b_by_name[name],
            max_states=MAX_RENAMING_STATES, max_nodes=MAX_RENAMING_NODES,
        )
        if gave_up:
            warnings.append(
                f"renaming search for FSM {name!r} exceeded its budget; "
                f"classifying as a structural difference"
            )
        if renaming is None:
            return DiffReport(items=items, category=DiffCategory.DIFFERENCE,
                              warnings=tuple(warnings))
        witness[name] = renaming
    return DiffReport(items=items, category=DiffCategory.SMALL_DIFFERENCE,
                      renaming=witness, warnings=tuple(warnings))


_TEMPLATES = {
    DiffKind.FSM_ADDED: "FSM {fsm} added.",
    DiffKind.FSM_REMOVED: "FSM {fsm} removed.",
    DiffKind.STATE_ADDED: "State {state} added in {fsm}.",
    DiffKind.STATE_REMOVED: "State {state} removed in {fsm}.",
    DiffKind.TRANSITION_ADDED: "Transition from {from_state} to {to_state} added in {fsm}.",
    DiffKind.TRANSITION_REMOVED: "Transition from {from_state} to {to_state} removed in {fsm}.",
    DiffKind.OUTCOME_CHANGED: "Transition condition changed in state {state}: '{old}' to '{new}'.",
    DiffKind.INITIAL_STATE_CHANGED: "Initial state changed in {fsm}: '{old}' to '{new}'.",
}


def render_messages(items: list[DiffItem]) -> list[str]:
    """One human-readable line per item, in item order."""
    lines = []
    for item in items:
        lines.append(_TEMPLATES[item.kind].format(
            fsm=item.fsm,
            state=item.state,
            from_state=item.from_state,
            to_state=item.to_state,
            old=item.old_outcome,
            new=item.new_outcome,
        ))
    return lines


def _item_to_obj(item: DiffItem) -> dict:
    obj = {"kind": item.kind.value, "fsm": item.fsm}
    for key, value in (
        ("state", item.state),
        ("from", item.from_state),
        ("to", item.to_state),
        ("outcome", item.outcome),
        ("oldOutcome", item.old_outcome),
        ("newOutcome", item.new_outcome),
    ):
        if value is not None:
            obj[key] = value
    return obj


def report_to_obj(report: DiffReport) -> dict:
    """The report as plain JSON-ready objects."""
    obj: dict = {
        "category": report.category.value,
        "items": [_item_to_obj(item) for item in report.items],
        "messages": render_messages(list(report.items)),
    }
    if report.renaming is not None:
        obj["renaming"] = {
            name: {"states": ren.states, "outcomes": ren.outcomes}
            for name, ren in report.renaming.items()
        }
    if report.warnings:
        obj["warnings"] = list(report.warnings)
    return obj
