"""Diff two versions of a handover machine and classify the change."""

from pathlib import Path

from chatfsm import categorize, parse_fsm_json, render_messages, structural_diff

PAIRS = Path(__file__).resolve().parent.parent / "fixtures" / "pairs"

parent = parse_fsm_json((PAIRS / "pair5" / "parent_fsm.json").read_text())
child = parse_fsm_json((PAIRS / "pair5" / "ground_true.json").read_text())

# Direction convention: first argument is the ground truth. States and
# transitions present only in the second argument are "added".
items = structural_diff(parent, child)
for line in render_messages(items):
    print(line)

report = categorize(parent, child)
print("category:", report.category.value)

# A pure relabeling classifies as a small difference and carries the
# witnessing renaming.
relabeled = parse_fsm_json(
    (PAIRS / "pair3" / "ground_true.json").read_text().replace('"none"', '"not_found"'))
ground_truth = parse_fsm_json((PAIRS / "pair3" / "ground_true.json").read_text())
small = categorize(ground_truth, relabeled)
print("category:", small.category.value)
print("witness:", small.renaming["FindPerson"].outcomes["DECIDE_NAVIGATE_STATE"])
