"""Filter the FSM class out of a robot source file and render it as DOT."""

import sys
from pathlib import Path

from chatfsm import diff_overlay, filter_fsm_regex, parse_fsm_json, to_dot

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

source = (FIXTURES / "pairs" / "pair5" / "parent.py").read_text()
spans = filter_fsm_regex(source, "parent.py")
for span in spans:
    print(f"{span.path}: bytes {span.start_byte}-{span.end_byte}")
    print(span.text.splitlines()[0])

# DOT output is byte-deterministic: a start point feeds the initial
# state, sinks are double-circled, and every edge carries its outcome.
doc = parse_fsm_json((FIXTURES / "pairs" / "pair5" / "ground_true.json").read_text())
sys.stdout.write(to_dot(doc))

# The overlay renders the second document with additions dashed and
# removals ghosted in gray.
parent = parse_fsm_json((FIXTURES / "pairs" / "pair5" / "parent_fsm.json").read_text())
sys.stdout.write(diff_overlay(parent, doc))
