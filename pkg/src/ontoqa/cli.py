"""Command line interface: ingest, ask, eval, serve, export-ontology."""

from __future__ import annotations

import json
import sys

import click

from .engine import Engine, EngineConfig, EngineError
from .evaluation import load_track, render_table, run_track, write_report_files, recall_by_mode
from .ontology import SchemaError
from .retrieval import SnapshotError


def _load_config(path: str | None) -> EngineConfig:
    try:
        return EngineConfig.from_file(path)
    except EngineError as exc:
        raise click.ClickException(str(exc)) from exc


@click.group()
@click.option("--config", "config_path", default=None, metavar="PATH",
              help="Config file (default ./qa.config when present).")
@click.pass_context
def main(ctx, config_path):
    """Domain question answering over a story corpus."""
    ctx.ensure_object(dict)
    ctx.obj["config"] = _load_config(config_path)


@main.command()
@click.argument("directory", type=click.Path(exists=True, file_okay=False))
@click.pass_context
def ingest(ctx, directory):
    """Analyze and index every .txt document in DIRECTORY."""
    engine = Engine(ctx.obj["config"])
    try:
        summary = engine.ingest(directory)
    except (EngineError, SchemaError, SnapshotError) as exc:
        raise click.ClickException(str(exc)) from exc
    click.echo(summary.describe())


@main.command()
@click.argument("question")
@click.option("--json", "as_json", is_flag=True, help="Print the raw JSON response.")
@click.pass_context
def ask(ctx, question, as_json):
    """Answer a natural language QUESTION from the ingested corpus."""
    engine = _loaded_engine(ctx.obj["config"])
    try:
        response = engine.ask(question)
    except EngineError as exc:
        raise click.ClickException(str(exc)) from exc
    if as_json:
        click.echo(json.dumps(response.to_dict(), indent=2, sort_keys=True, ensure_ascii=False))
        return
    click.echo(f"question: {response.question}")
    click.echo(f"focus:    {response.focus}")
    for predicate in response.frame_predicates:
        click.echo(f"frame:    {predicate}")
    if not response.answers:
        click.echo("no answers found")
        return
    for rank, answer in enumerate(response.answers, start=1):
        precise = answer.precise_answer or "(sentence only)"
        source = "ontology" if answer.ontology_derived else answer.doc_id
        click.echo(f"{rank}. {precise}  [score {answer.score:.3f}, {source}]")
        click.echo(f"   {answer.sentence}")


@main.command(name="eval")
@click.argument("track_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--report-dir", type=click.Path(file_okay=False), default=None,
              help="Write report.json, per_question.csv and recall.png here.")
@click.option("--json", "as_json", is_flag=True, help="Print the JSON report instead of the table.")
@click.pass_context
def eval_track(ctx, track_file, report_dir, as_json):
    """Run the question track in TRACK_FILE and report recall."""
    engine = _loaded_engine(ctx.obj["config"])
    try:
        track = load_track(track_file)
        report = run_track(track, engine)
    except (EngineError, ValueError) as exc:
        raise click.ClickException(str(exc)) from exc
    if as_json:
        payload = report.to_dict()
        payload["recall_by_mode"] = recall_by_mode(report, track)
        click.echo(json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False))
    else:
        click.echo(render_table(report, track))
    if report_dir:
        for path in write_report_files(report, track, report_dir):
            click.echo(f"wrote {path}", err=True)


@main.command()
@click.option("--port", default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.pass_context
def serve(ctx, port, host):
    """Serve the HTTP API for the web console."""
    from .service import serve as run_service

    try:
        run_service(ctx.obj["config"], host, port)
    except (EngineError, SchemaError, SnapshotError, OSError) as exc:
        raise click.ClickException(str(exc)) from exc


@main.command(name="export-ontology")
@click.argument("out_path", type=click.Path(dir_okay=False, writable=True))
@click.pass_context
def export_ontology(ctx, out_path):
    """Write the populated ontology (base ontology before any ingest)."""
    engine = _loaded_engine(ctx.obj["config"], need_index=False)
    path = engine.export_ontology(out_path)
    stats = engine.ontology_stats()
    click.echo(
        f"wrote {path} ({stats['classes']} classes, {stats['properties']} properties, "
        f"{stats['triples']} triples)"
    )


def _loaded_engine(config: EngineConfig, need_index: bool = True) -> Engine:
    try:
        engine = Engine.load(config)
    except (EngineError, SchemaError, SnapshotError) as exc:
        raise click.ClickException(str(exc)) from exc
    if need_index and engine.index is None:
        raise click.ClickException(
            f"no index snapshot at {config.index_path}; run 'qa ingest <dir>' first"
        )
    return engine


if __name__ == "__main__":
    sys.exit(main())
