"""Replayable evaluation pipeline over parent/child source pairs.

Each pair holds the pre-modification source (parent), the
post-modification source (child, the ground truth) and optionally a
precomputed change request, a pre-extracted ground-truth document and a
codebase snapshot for context runs.

The pipeline stages run in a fixed order: filter the parent, obtain the
change request, optionally build retrieval context, ask the modification
agent, extract the reply, obtain the ground-truth document, and
categorize the difference. Per-stage wall-clock times are recorded and
any stage error is captured as data instead of aborting other pairs.
"""

from __future__ import annotations

import statistics
import time
from dataclasses import dataclass, field
from pathlib import Path

from .agents import FsmAgents
from .codefilter import filtered_source
from .diff import DiffCategory, categorize, render_messages
from .model import parse_fsm_json
from .retrieval import ContextBundle, index_codebase, retrieve, wrap_context

__all__ = [
    "STAGES",
    "HUMAN_BASELINE_SECONDS",
    "EvalPair",
    "EvalResult",
    "load_pairs",
    "run_pipeline",
    "run_all",
    "report",
]

STAGES = (
    "filter_fsm",
    "summarize_changes",
    "get_context",
    "retrieve_context",
    "modify_fsm",
    "extract_reply",
    "extract_ground_truth",
    "diff",
)

# Mean manual editing time used as the fixed comparison row of the
# timing table. A constant, never measured by this harness.
HUMAN_BASELINE_SECONDS = 164.0

DEFAULT_RETRIEVAL_K = 5


@dataclass(frozen=True)
class EvalPair:
    """One parent/child source pair plus its optional side files."""

    pair_id: str
    parent_source: str
    child_source: str
    change_request: str | None = None
    codebase_dir: Path | None = None
    ground_truth_json: str | None = None
    parent_fsm_json: str | None = None

    def __post_init__(self):
        if not self.parent_source or not self.child_source:
            raise ValueError("parent and child sources must be nonempty")


@dataclass
class EvalResult:
    """Per-stage outcome of one pipeline run."""

    pair_id: str
    category: DiffCategory | None = None
    diff_messages: list[str] = field(default_factory=list)
    stage_times: dict[str, float] = field(default_factory=dict)
    failure: str | None = None

    def to_obj(self) -> dict:
        return {
            "pairId": self.pair_id,
            "category": self.category.value if self.category else None,
            "diffMessages": list(self.diff_messages),
            "stageTimes": dict(self.stage_times),
            "failure": self.failure,
        }


def _read_single(pair_dir: Path, stem: str) -> str | None:
    matches = sorted(pair_dir.glob(f"{stem}.*"))
    matches = [m for m in matches if m.is_file()]
    if not matches:
        return None
    return matches[0].read_text(encoding="utf-8")


def load_pairs(pairs_dir: str | Path) -> tuple[list[EvalPair], list[str]]:
    """Load every pair directory under ``pairs_dir``, sorted by pair id.

    A directory missing its parent or child file is skipped and reported
    in the returned warning list.
    """
    root = Path(pairs_dir)
    if not root.is_dir():
        raise FileNotFoundError(f"not a directory: {root}")
    pairs: list[EvalPair] = []
    warnings: list[str] = []
    for pair_dir in sorted(p for p in root.iterdir() if p.is_dir()):
        parent = _read_single(pair_dir, "parent")
        child = _read_single(pair_dir, "child")
        if not parent or not child:
            warnings.append(f"skipped {pair_dir.name}: missing parent or child file")
            continue
        request_path = pair_dir / "request.txt"
        ground_truth_path = pair_dir / "ground_true.json"
        parent_fsm_path = pair_dir / "parent_fsm.json"
        codebase = pair_dir / "codebase"
        pairs.append(EvalPair(
            pair_id=pair_dir.name,
            parent_source=parent,
            child_source=child,
            change_request=request_path.read_text(encoding="utf-8").strip()
            if request_path.is_file() else None,
            codebase_dir=codebase if codebase.is_dir() else None,
            ground_truth_json=ground_truth_path.read_text(encoding="utf-8")
            if ground_truth_path.is_file() else None,
            parent_fsm_json=parent_fsm_path.read_text(encoding="utf-8")
            if parent_fsm_path.is_file() else None,
        ))
    return pairs, warnings


class _StageClock:
    def __init__(self):
        self.times = {stage: 0.0 for stage in STAGES}

    def run(self, stage: str, fn):
        started = time.perf_counter()
        try:
            return fn()
        finally:
            self.times[stage] = time.perf_counter() - started


def _filter_or_whole(source: str) -> str:
    filtered = filtered_source(source)
    return filtered if filtered else source


def run_pipeline(pair: EvalPair, agents: FsmAgents, *, with_context: bool = False,
                 retrieval_k: int = DEFAULT_RETRIEVAL_K) -> EvalResult:
    """Run every stage for one pair; stage errors become result data."""
    result = EvalResult(pair_id=pair.pair_id)
    clock = _StageClock()
    result.stage_times = clock.times
    stage = STAGES[0]
    try:
        filtered = clock.run("filter_fsm", lambda: _filter_or_whole(pair.parent_source))

        stage = "summarize_changes"
        if pair.change_request is not None:
            request = pair.change_request
        else:
            request = clock.run("summarize_changes", lambda: agents.summarize_changes(
                pair.parent_source, pair.child_source))

        context_block = None
        if with_context:
            stage = "get_context"
            query = clock.run("get_context", lambda: agents.context_query(
                f"{filtered}\n\n{request}"))
            stage = "retrieve_context"

            def build_context():
                if pair.codebase_dir is None:
                    return wrap_context(ContextBundle(chunks=[]))
                index = index_codebase(pair.codebase_dir)
                return wrap_context(retrieve(index, query, retrieval_k))

            context_block = clock.run("retrieve_context", build_context)

        stage = "modify_fsm"
        reply = clock.run("modify_fsm", lambda: agents.modify_fsm(
            filtered, request, context=context_block))

        stage = "extract_reply"
        reply_doc = clock.run("extract_reply", lambda: agents.extract_fsm(reply))

        stage = "extract_ground_truth"
        if pair.ground_truth_json is not None:
            ground_truth = clock.run(
                "extract_ground_truth",
                lambda: parse_fsm_json(pair.ground_truth_json))
        else:
            ground_truth = clock.run(
                "extract_ground_truth",
                lambda: agents.extract_fsm(_filter_or_whole(pair.child_source)))

        stage = "diff"

        def categorize_pair():
            diff_report = categorize(ground_truth, reply_doc)
            result.category = diff_report.category
            result.diff_messages = render_messages(list(diff_report.items))

        clock.run("diff", categorize_pair)
    except Exception as exc:  # noqa: BLE001  -- failures are data here
        result.failure = f"{stage}: {exc}"
        result.category = None
        result.diff_messages = []
    return result


def run_all(pairs: list[EvalPair], agents: FsmAgents, *,
            with_context: bool = False) -> list[EvalResult]:
    return [run_pipeline(pair, agents, with_context=with_context) for pair in pairs]


def results_to_obj(results: list[EvalResult], *, model_id: str, with_context: bool,
                   cassette_mode: str) -> dict:
    return {
        "model": model_id,
        "withContext": with_context,
        "cassetteMode": cassette_mode,
        "results": [r.to_obj() for r in results],
    }


def _category_counts(results: list[dict]) -> dict[str, int]:
    counts = {"no_difference": 0, "small_difference": 0, "difference": 0, "failed": 0}
    for result in results:
        if result.get("failure"):
            counts["failed"] += 1
        elif result.get("category") in counts:
            counts[result["category"]] += 1
    return counts


def _format_table(headers: list[str], rows: list[list[str]]) -> str:
    widths = [max(len(str(cell)) for cell in column)
              for column in zip(headers, *rows)] if rows else [len(h) for h in headers]
    lines = []

    def fmt(cells):
        return " | ".join(str(cell).ljust(width) for cell, width in zip(cells, widths))

    lines.append(fmt(headers))
    lines.append("-+-".join("-" * width for width in widths))
    for row in rows:
        lines.append(fmt(row))
    return "\n".join(lines)


def report(runs: list[dict]) -> dict:
    """Correctness and timing tables over one or more evaluation runs.

    Each run is the object produced by :func:`results_to_obj`. Returns
    plain-text and JSON renderings. In replay mode the latency cells are
    the literal label ``replay``; measured means appear only for
    passthrough runs. The manual-editing row is a fixed constant.
    """
    correctness_rows = []
    correctness_obj = []
    for run in runs:
        counts = _category_counts(run["results"])
        setting = "with context" if run["withContext"] else "without context"
        correctness_rows.append([
            run["model"], setting,
            counts["no_difference"], counts["small_difference"],
            counts["difference"], counts["failed"],
        ])
        correctness_obj.append({
            "model": run["model"],
            "withContext": run["withContext"],
            "noDifference": counts["no_difference"],
            "smallDifference": counts["small_difference"],
            "difference": counts["difference"],
            "failed": counts["failed"],
        })

    timing_rows = []
    timing_obj = []
    by_model: dict[str, list[dict]] = {}
    for run in runs:
        by_model.setdefault(run["model"], []).append(run)
    for model, model_runs in by_model.items():
        replay = any(run["cassetteMode"] != "passthrough" for run in model_runs)
        if replay:
            value = "replay"
        else:
            times = [
                result["stageTimes"].get("modify_fsm", 0.0)
                for run in model_runs for result in run["results"]
                if not result.get("failure")
            ]
            value = f"{statistics.mean(times):.1f}" if times else "n/a"
        timing_rows.append([model, value])
        timing_obj.append({"model": model, "meanSeconds": value})
    timing_rows.append(["human (manual baseline)", f"{HUMAN_BASELINE_SECONDS:.0f}"])
    timing_obj.append({"model": "human (manual baseline)",
                       "meanSeconds": HUMAN_BASELINE_SECONDS})

    text = "\n".join([
        "Correctness",
        _format_table(
            ["model", "setting", "no diff", "small diff", "diff", "failed"],
            correctness_rows),
        "",
        "Mean modification time (s)",
        _format_table(["model", "seconds"], timing_rows),
    ])
    obj = {"correctness": correctness_obj, "timing": timing_obj}
    return {"text": text, "obj": obj}
