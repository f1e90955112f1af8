"""Replay the full evaluation over the bundled pairs and print the tables.

Runs entirely offline: every model response comes from the recorded
cassettes, so the run is deterministic and reproduces the published
correctness rows (5 no-difference, 1 small-difference, 0 difference per
model, with and without context).
"""

from pathlib import Path

from chatfsm import Cassette, CassetteMode, ChatGateway, FsmAgents, LlmProviderConfig
from chatfsm.harness import load_pairs, report, results_to_obj, run_all

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
MODELS = ("gpt-4o-2024-05-13", "llama-3.1-70b-versatile")

pairs, warnings = load_pairs(FIXTURES / "pairs")
assert not warnings

runs = []
for model in MODELS:
    cassette = Cassette(FIXTURES / "cassettes" / f"{model}.json",
                        mode=CassetteMode.REPLAY)
    agents = FsmAgents(ChatGateway(LlmProviderConfig(model_id=model), cassette))
    for with_context in (False, True):
        results = run_all(pairs, agents, with_context=with_context)
        for result in results:
            setting = "ctx" if with_context else "raw"
            print(f"{model} [{setting}] {result.pair_id}: "
                  f"{result.category.value if result.category else result.failure}")
        runs.append(results_to_obj(results, model_id=model,
                                   with_context=with_context,
                                   cassette_mode="replay"))

print()
print(report(runs)["text"])
