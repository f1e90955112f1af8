"""Index a codebase snapshot and assemble a retrieval context block."""

import shutil
import tempfile
from pathlib import Path

from chatfsm import index_codebase, retrieve, wrap_context

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
QUERY = ("_DecideNavigateState DECIDE_NAVIGATE_STATE decide navigate "
         "waypoint room search target outcomes implementation")

# The pair 3 snapshot predates the decision-state class, so no amount of
# querying can retrieve its implementation.
index = index_codebase(FIXTURES / "pairs" / "pair3" / "codebase")
bundle = retrieve(index, QUERY, k=3)
print("chunks without the class file:")
for chunk, score in bundle.chunks:
    print(f"  {score:6.2f}  {chunk.path}:{chunk.start_line}-{chunk.end_line}")

# Drop the class file in, re-index, and it comes back at rank one.
with tempfile.TemporaryDirectory() as scratch:
    codebase = Path(scratch) / "codebase"
    shutil.copytree(FIXTURES / "pairs" / "pair3" / "codebase", codebase)
    shutil.copy(FIXTURES / "manual_context" / "decide_navigate_state.py",
                codebase / "robot_skills" / "decide_navigate_state.py")
    enriched = index_codebase(codebase)
    bundle = retrieve(enriched, QUERY, k=3)
    print("chunks with the class file:")
    for chunk, score in bundle.chunks:
        print(f"  {score:6.2f}  {chunk.path}:{chunk.start_line}-{chunk.end_line}")

    print()
    print(wrap_context(bundle)[:400], "...")
