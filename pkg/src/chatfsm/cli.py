"""Command-line interface.

Subcommands mirror the toolkit surfaces: ``extract`` (code filtering),
``context`` (retrieval index and queries), ``viz`` (DOT emission),
``eval`` (the replayable pipeline and its report) and ``serve`` (the
HTTP facade).
"""

from __future__ import annotations

import json
import os
import sys
from pathlib import Path

import click

from .agents import FsmAgents
from .codefilter import filter_fsm_llm, filter_fsm_regex
from .dot import RankDirection, diff_overlay, to_dot
from .gateway import Cassette, CassetteMode, ChatGateway, LlmProviderConfig
from .harness import load_pairs, report, results_to_obj, run_all
from .model import parse_fsm_json
from .retrieval import BUDGET_CHARS, index_codebase, load_index, retrieve, save_index, wrap_context


def gateway_options(command):
    decorators = [
        click.option("--model", default="gpt-4o-2024-05-13", show_default=True,
                     help="Model identifier sent to the provider."),
        click.option("--base-url", default="https://api.openai.com/v1",
                     show_default=True, help="Chat-completion endpoint base URL."),
        click.option("--credential-env", default="CHATFSM_API_KEY",
                     show_default=True,
                     help="Environment variable holding the API key."),
        click.option("--cassette", type=click.Path(path_type=Path), default=None,
                     help="Cassette file for recorded responses."),
        click.option("--cassette-mode",
                     type=click.Choice(["record", "replay", "passthrough"]),
                     default="replay", show_default=True),
        click.option("--timeout", type=float, default=60.0, show_default=True),
        click.option("--max-retries", type=int, default=2, show_default=True),
    ]
    for decorator in reversed(decorators):
        command = decorator(command)
    return command


def build_agents(model, base_url, credential_env, cassette, cassette_mode,
                 timeout, max_retries) -> FsmAgents:
    config = LlmProviderConfig(
        base_url=base_url, model_id=model, credential_env_var=credential_env,
        request_timeout=timeout, max_retries=max_retries)
    store = None
    if cassette is not None:
        store = Cassette(cassette, mode=CassetteMode(cassette_mode))
    return FsmAgents(ChatGateway(config, store))


@click.group()
def main():
    """Toolkit for robot finite state machines."""


@main.command()
@click.argument("source", type=click.Path(exists=True, path_type=Path))
@click.option("--filter", "filter_kind", type=click.Choice(["regex", "llm"]),
              default="regex", show_default=True)
@click.option("--spans", is_flag=True,
              help="Print byte offsets as JSON lines instead of the code.")
@gateway_options
def extract(source, filter_kind, spans, **gateway_kwargs):
    """Isolate the state-machine code regions of SOURCE."""
    text = source.read_text(encoding="utf-8")
    if filter_kind == "regex":
        found = filter_fsm_regex(text, str(source))
        if spans:
            for span in found:
                click.echo(json.dumps({
                    "path": span.path, "startByte": span.start_byte,
                    "endByte": span.end_byte}))
        else:
            sys.stdout.write("\n\n".join(span.text for span in found))
            if found:
                sys.stdout.write("\n")
    else:
        agents = build_agents(**gateway_kwargs)
        sys.stdout.write(filter_fsm_llm(text, agents))


@main.group()
def context():
    """Retrieval index over a codebase snapshot."""


@context.command("index")
@click.argument("directory", type=click.Path(exists=True, file_okay=False,
                                             path_type=Path))
@click.option("--out", type=click.Path(path_type=Path), default=Path("context_index.json"),
              show_default=True)
def context_index(directory, out):
    """Index DIRECTORY into a single JSON file."""
    index = index_codebase(directory)
    save_index(index, out)
    for warning in index.warnings:
        click.echo(f"warning: {warning}", err=True)
    click.echo(f"indexed {len(index.chunks)} chunks into {out}")


@context.command("query")
@click.argument("index_file", type=click.Path(exists=True, path_type=Path))
@click.argument("text")
@click.option("-k", type=int, default=5, show_default=True)
@click.option("--budget", type=int, default=BUDGET_CHARS, show_default=True)
def context_query(index_file, text, k, budget):
    """Print the context block for a query."""
    index = load_index(index_file)
    bundle = retrieve(index, text, k, budget_chars=budget)
    sys.stdout.write(wrap_context(bundle) + "\n")


@main.command()
@click.argument("fsm_json", type=click.Path(exists=True, path_type=Path))
@click.option("--diff", "ground_truth", type=click.Path(exists=True, path_type=Path),
              default=None,
              help="Ground-truth document; renders FSM_JSON with differences styled.")
@click.option("--rankdir", type=click.Choice(["LR", "TB"]), default="LR",
              show_default=True)
def viz(fsm_json, ground_truth, rankdir):
    """Emit DOT text for a document."""
    doc = parse_fsm_json(fsm_json.read_text(encoding="utf-8"))
    direction = RankDirection(rankdir)
    if ground_truth is not None:
        gt_doc = parse_fsm_json(ground_truth.read_text(encoding="utf-8"))
        sys.stdout.write(diff_overlay(gt_doc, doc, rank_direction=direction))
    else:
        from .dot import DotOptions
        sys.stdout.write(to_dot(doc, DotOptions(rank_direction=direction)))


@main.group("eval")
def eval_group():
    """Run and report the fixture-pair evaluation."""


@eval_group.command("run")
@click.argument("pairs_dir", type=click.Path(exists=True, file_okay=False,
                                             path_type=Path))
@click.option("--with-context", is_flag=True)
@click.option("--out", type=click.Path(path_type=Path), default=None,
              help="Results file [default: results_<model>[_ctx].json].")
@gateway_options
def eval_run(pairs_dir, with_context, out, **gateway_kwargs):
    """Run the pipeline over every pair in PAIRS_DIR."""
    if gateway_kwargs["cassette"] is None and \
            gateway_kwargs["cassette_mode"] != "passthrough":
        raise click.UsageError("--cassette is required outside passthrough mode")
    agents = build_agents(**gateway_kwargs)
    pairs, warnings = load_pairs(pairs_dir)
    for warning in warnings:
        click.echo(f"warning: {warning}", err=True)
    results = run_all(pairs, agents, with_context=with_context)
    obj = results_to_obj(results, model_id=gateway_kwargs["model"],
                         with_context=with_context,
                         cassette_mode=gateway_kwargs["cassette_mode"])
    if out is None:
        suffix = "_ctx" if with_context else ""
        out = Path(f"results_{gateway_kwargs['model']}{suffix}.json")
    out.write_text(json.dumps(obj, indent=2) + "\n", encoding="utf-8")
    failed = [r for r in results if r.failure is not None]
    for result in results:
        status = result.failure or (result.category.value if result.category else "?")
        click.echo(f"{result.pair_id}: {status}")
    click.echo(f"wrote {out}")
    if failed:
        raise SystemExit(1)


@eval_group.command("report")
@click.argument("results", nargs=-1, required=True,
                type=click.Path(exists=True, path_type=Path))
@click.option("--json", "as_json", is_flag=True, help="Emit the JSON rendering.")
def eval_report(results, as_json):
    """Print correctness and timing tables for one or more result files."""
    runs = [json.loads(path.read_text(encoding="utf-8")) for path in results]
    rendered = report(runs)
    if as_json:
        click.echo(json.dumps(rendered["obj"], indent=2))
    else:
        click.echo(rendered["text"])


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=None,
              help="Port to bind [default: $PORT or 8000].")
@click.option("--codebase", type=click.Path(exists=True, file_okay=False,
                                            path_type=Path), default=None,
              help="Codebase snapshot for context retrieval.")
@click.option("--session-dir", type=click.Path(path_type=Path), default=None,
              help="Enable the on-disk session store.")
@gateway_options
def serve(host, port, codebase, session_dir, **gateway_kwargs):
    """Start the HTTP service."""
    import uvicorn

    from .service import create_app

    agents = build_agents(**gateway_kwargs)
    app = create_app(agents, codebase_dir=codebase, session_dir=session_dir)
    if port is None:
        port = int(os.environ.get("PORT", "8000"))
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
