"""Command-line interface.

Exit codes: 0 success, 1 domain failure (nothing found, unparseable
input data), 2 usage error, 3 I/O error.
"""

from __future__ import annotations

import json
import logging
import os
import sys
from typing import Optional

import click

from . import evaluation, kb, questions, seeding
from .service import BadRequest, QAService


def _die(code: int, message: str):
    click.echo(message, err=True)
    sys.exit(code)


def _load_store(path: str) -> kb.Store:
    try:
        return kb.ingest_dump(path)
    except OSError as err:
        _die(3, "cannot read knowledge base: %s" % err)
    except kb.MalformedRecord as err:
        _die(1, "bad knowledge base dump: %s" % err)


def _load_patterns(path: Optional[str]):
    if path is None:
        return None
    try:
        return questions.load_hindi_patterns(path)
    except OSError as err:
        _die(3, "cannot read pattern file: %s" % err)
    except questions.PatternError as err:
        _die(1, "bad pattern file: %s" % err)


@click.group()
def main():
    logging.basicConfig(format="%(message)s")


@main.command()
@click.argument("question")
@click.option("--lang", type=click.Choice(["en", "hi", "formula"]), default="en")
@click.option("--kb", "kb_path", required=True, help="knowledge-base dump (JSON lines)")
@click.option("--patterns", "patterns_path", default=None,
              help="Hindi pattern file (defaults to the bundled one)")
def ask(question: str, lang: str, kb_path: str, patterns_path: Optional[str]):
    """Answer a natural-language or formula question."""
    service = QAService(_load_store(kb_path), _load_patterns(patterns_path))
    payload = service.ask(question, lang)
    if payload.status in ("not-found", "unparseable"):
        _die(1, "%s: %s" % (payload.status, payload.message))
    click.echo("status: %s" % payload.status)
    click.echo("formula: %s" % payload.formula_latex)
    if payload.qid:
        click.echo("qid: %s" % payload.qid)
    if payload.identifiers:
        click.echo("identifiers:")
        for info in payload.identifiers:
            line = "  %s" % info.symbol
            if info.label:
                line += "  %s" % info.label
            if info.known_value is not None:
                line += " = %g" % info.known_value
                if info.unit:
                    line += " %s" % info.unit
            click.echo(line)


def _parse_set(pairs) -> dict:
    bindings = {}
    for pair in pairs:
        symbol, eq, value = pair.partition("=")
        if not eq or not symbol:
            raise click.BadParameter("expected SYMBOL=NUMBER, got %r" % pair)
        try:
            bindings[symbol.strip()] = float(value)
        except ValueError:
            raise click.BadParameter("%r is not a number" % value)
    return bindings


@main.command()
@click.argument("latex")
@click.option("--set", "assignments", multiple=True,
              help="identifier binding, e.g. --set r=2 (repeatable)")
@click.option("--kb", "kb_path", default=None,
              help="knowledge-base dump; item constants apply when a qid is known")
@click.option("--qid", default=None, help="item whose known values pre-fill identifiers")
def calc(latex: str, assignments, kb_path: Optional[str], qid: Optional[str]):
    """Evaluate a LaTeX formula with the given identifier values."""
    store = _load_store(kb_path) if kb_path else kb.Store({}, 0)
    service = QAService(store)
    try:
        result = service.compute(qid=qid, formula=latex,
                                 bindings=_parse_set(assignments))
    except BadRequest as err:
        _die(1, str(err))
    if result["status"] == "needs-values":
        _die(1, result["message"])
    if result["status"] == "error":
        _die(1, result["message"])
    click.echo("value: %r" % result["value"])
    if result["solved_for"]:
        click.echo("solved for: %s" % result["solved_for"])
    for symbol, source in result["constant_sources"].items():
        click.echo("%s = %g (%s)" % (symbol, result["effective_bindings"][symbol], source))


@main.command()
@click.option("--dump", "dump_path", required=True, help="MediaWiki XML export")
@click.option("--out", "out_path", required=True)
@click.option("--format", "fmt", type=click.Choice(["tsv", "kbdump"]), default="tsv")
@click.option("--geometry-config", "config_path", default=None,
              help="JSON file with categories / property_keywords lists")
def seed(dump_path: str, out_path: str, fmt: str, config_path: Optional[str]):
    """Extract formula statements from a wiki dump."""
    cfg = None
    if config_path is not None:
        try:
            with open(config_path, encoding="utf-8") as handle:
                raw = json.load(handle)
        except OSError as err:
            _die(3, "cannot read geometry config: %s" % err)
        except json.JSONDecodeError as err:
            _die(1, "bad geometry config: %s" % err)
        cfg = seeding.GeometryConfig(
            categories=tuple(raw.get("categories", seeding.GEOMETRY_CATEGORIES)),
            property_keywords=tuple(raw.get("property_keywords",
                                            seeding.PROPERTY_KEYWORDS)))
    try:
        statements = seeding.collect_statements(dump_path, cfg)
        seeding.emit(statements, out_path, fmt)
    except seeding.XmlError as err:
        _die(1, "bad dump: %s" % err)
    except OSError as err:
        _die(3, str(err))
    click.echo("%d statements -> %s" % (len(statements), out_path))


@main.command(name="eval")
@click.option("--mode", type=click.Choice(["seeding", "retrieval"]), required=True)
@click.option("--annotations", "annotations_path", required=True,
              help="seeding: annotation CSV; retrieval: annotated questions TSV")
@click.option("--kb", "kb_path", default=None)
@click.option("--json", "as_json", is_flag=True, help="emit machine-readable JSON")
def eval_cmd(mode: str, annotations_path: str, kb_path: Optional[str], as_json: bool):
    """Score an annotated seeding or retrieval run."""
    if mode == "seeding":
        try:
            annotations = evaluation.read_annotations(annotations_path)
        except OSError as err:
            _die(3, str(err))
        except evaluation.AnnotationError as err:
            _die(1, "bad annotation file: %s" % err)
        matrix = evaluation.tabulate(annotations)
        scores = evaluation.metrics(matrix)
        if as_json:
            click.echo(json.dumps(evaluation.report_json(matrix, scores), indent=2))
        else:
            click.echo(evaluation.render_report(matrix, scores), nl=False)
        return
    if kb_path is None:
        raise click.UsageError("--mode retrieval requires --kb")
    store = _load_store(kb_path)
    try:
        score = evaluation.score_retrieval(store, annotations_path)
    except OSError as err:
        _die(3, str(err))
    except evaluation.QuestionsFileError as err:
        _die(1, "bad questions file: %s" % err)
    if as_json:
        click.echo(json.dumps(evaluation.verdicts_json(score),
                              ensure_ascii=False, indent=2))
    else:
        click.echo(evaluation.render_verdicts(score), nl=False)


@main.command()
@click.option("--kb", "kb_path", required=True)
@click.option("--addr", default="127.0.0.1:8000", show_default=True)
@click.option("--patterns", "patterns_path", default=None)
@click.option("--static", "static_dir", default=None,
              help="Also serve this directory at / (e.g. the built web UI).")
def serve(kb_path: str, addr: str, patterns_path: Optional[str], static_dir: Optional[str]):
    """Serve the HTTP API."""
    import uvicorn

    from .api import create_app

    host, _, port_text = addr.rpartition(":")
    if not host or not port_text.isdigit():
        raise click.UsageError("--addr must look like HOST:PORT")
    if static_dir is not None and not os.path.isdir(static_dir):
        raise click.UsageError(f"--static directory not found: {static_dir}")
    app = create_app(_load_store(kb_path), _load_patterns(patterns_path))
    if static_dir is not None:
        from starlette.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=static_dir, html=True), name="static")
    uvicorn.run(app, host=host, port=int(port_text))


if __name__ == "__main__":
    main()
