"""Command-line interface: index, search, serve, eval."""

from __future__ import annotations

import json

import click

from .concepts import ConceptMapping, MappingFormatError, load_mapping
from .corpus import CorpusFormatError, load_corpus
from .evaluation import (
    evaluate,
    format_report_table,
    load_qrels,
    load_queries,
    load_run,
    run_queries,
    save_report,
    save_run,
)
from .index import IndexFormatError, build_index, load_index, save_index
from .ranking import EmptyQueryError, RankingParams
from .service import MODEL_ALIASES, SearchParamError, Snapshot, execute_search
from .service import serve as _serve

_ERRORS = (
    CorpusFormatError,
    MappingFormatError,
    IndexFormatError,
    SearchParamError,
    EmptyQueryError,
    ValueError,
)


@click.group()
@click.version_option(package_name="raredx")
def main():
    """Vertical search engine for rare-disease diagnostic queries."""


@main.command("index")
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option(
    "--mapping",
    "mapping_path",
    type=click.Path(exists=True, dir_okay=False),
    help="Concept mapping to validate against the corpus.",
)
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False, writable=True))
def cmd_index(corpus_path, mapping_path, out_path):
    """Build an index file from a JSON-lines corpus."""
    try:
        docs = load_corpus(corpus_path)
        index = build_index(docs)
        if mapping_path:
            mapping = load_mapping(mapping_path)
            unknown = [d for d in mapping.by_doc if not index.has_doc(d)]
            if unknown:
                click.echo(
                    f"warning: mapping references {len(unknown)} doc_ids missing from the corpus",
                    err=True,
                )
        save_index(index, out_path)
    except _ERRORS as exc:
        raise click.ClickException(str(exc))
    click.echo(
        f"indexed {index.doc_count} documents ({index.collection_term_count} tokens) -> {out_path}"
    )


def _format_search_table(payload: dict) -> str:
    lines = [f"query: {payload['query_echo']}  mode: {payload['mode']}  ({payload['elapsed_ms']} ms)"]
    results = payload["results"]
    if not results:
        lines.append("(no matches)")
        return "\n".join(lines)
    if payload["mode"] == "documents":
        for hit in results:
            score = "unmatchable" if hit["score"] is None else f"{hit['score']:.4f}"
            lines.append(f"{hit['rank']:>3}. [{score}] {hit['doc_id']}  {hit['title']} ({hit['source']})")
            if hit["snippet"]:
                lines.append(f"     {hit['snippet']}")
    elif payload["mode"] == "clusters":
        for pos, cluster in enumerate(results, 1):
            lines.append(
                f"{pos:>3}. {cluster['concept_name']} [{cluster['concept_id']}] "
                f"({cluster['size']} docs, best rank {cluster['representative']['rank']})"
            )
            for member in cluster["members"]:
                lines.append(f"     r{member['rank']:<3} {member['doc_id']}  {member['title']}")
    else:
        for pos, concept in enumerate(results, 1):
            docs = ", ".join(f"{d['doc_id']}@{d['rank']}" for d in concept["contributing_docs"])
            lines.append(
                f"{pos:>3}. [{concept['score']:.4f}] {concept['concept_name']} "
                f"[{concept['concept_id']}]  {docs}"
            )
    return "\n".join(lines)


@main.command("search")
@click.option("--index", "index_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--mapping", "mapping_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--query", "-q", "query_text", required=True)
@click.option("--mode", type=click.Choice(["documents", "clusters", "concepts"]), default="documents")
@click.option("--by", type=click.Choice(["text", "concept"]), default="text")
@click.option("--model", type=click.Choice(sorted(MODEL_ALIASES)), default="dirichlet")
@click.option("--lambda", "lam", type=float, default=None, help="Jelinek-Mercer smoothing weight.")
@click.option("--mu", type=float, default=None, help="Dirichlet smoothing parameter.")
@click.option("--n", "--top-n", "n", type=int, default=20, show_default=True)
@click.option("--j", "--top-j", "j", type=int, default=50, show_default=True)
@click.option("--corpus", "corpus_filter", type=click.Choice(["all", "rare"]), default="all")
@click.option("--format", "fmt", type=click.Choice(["json", "table"]), default="json")
def cmd_search(index_path, mapping_path, query_text, mode, by, model, lam, mu, n, j, corpus_filter, fmt):
    """Query an index file; prints the same payload the HTTP service returns."""
    try:
        snapshot = Snapshot(
            load_index(index_path),
            load_mapping(mapping_path) if mapping_path else ConceptMapping(),
            index_path,
            mapping_path,
        )
        payload = execute_search(
            snapshot,
            query_text,
            mode=mode,
            by=by,
            model=model,
            lam=lam,
            mu=mu,
            n=n,
            j=j,
            corpus=corpus_filter,
        )
    except _ERRORS as exc:
        raise click.ClickException(str(exc))
    if fmt == "json":
        click.echo(json.dumps(payload, indent=2, ensure_ascii=False))
    else:
        click.echo(_format_search_table(payload))


@main.command("serve")
@click.option("--index", "index_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--mapping", "mapping_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--port", type=int, default=8080, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--static", "static_dir", type=click.Path(exists=True, file_okay=False), help="Serve a built web UI from this directory.")
def cmd_serve(index_path, mapping_path, port, host, static_dir):
    """Serve the HTTP search API over an index snapshot (SIGHUP reloads it)."""
    try:
        _serve(index_path, mapping_path, port=port, host=host, static_dir=static_dir)
    except _ERRORS as exc:
        raise click.ClickException(str(exc))
    except OSError as exc:
        raise click.ClickException(f"cannot serve on {host}:{port}: {exc}")


@main.command("eval")
@click.option("--run", "run_path", type=click.Path(exists=True, dir_okay=False), help="Score an existing run file.")
@click.option("--index", "index_path", type=click.Path(exists=True, dir_okay=False), help="Run the queries against this index, then score.")
@click.option("--queries", "queries_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--qrels", "qrels_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--ks", default="10,20", show_default=True, help="Comma-separated cutoffs.")
@click.option("--model", type=click.Choice(sorted(MODEL_ALIASES)), default="dirichlet")
@click.option("--lambda", "lam", type=float, default=None)
@click.option("--mu", type=float, default=None)
@click.option("--n", "--top-n", "n", type=int, default=20, help="Retrieval depth in index mode.")
@click.option("--system", "system_name", default="raredx", show_default=True)
@click.option("--out", "report_path", type=click.Path(dir_okay=False, writable=True), help="Write the machine-readable report here.")
@click.option("--run-out", "run_out_path", type=click.Path(dir_okay=False, writable=True), help="Write the generated run file (index mode).")
@click.option("--format", "fmt", type=click.Choice(["json", "table"]), default="table")
def cmd_eval(run_path, index_path, queries_path, qrels_path, ks, model, lam, mu, n, system_name, report_path, run_out_path, fmt):
    """Evaluate a run (or an index) against queries and qrels."""
    if bool(run_path) == bool(index_path):
        raise click.UsageError("provide exactly one of --run or --index")
    try:
        cutoffs = sorted({int(part) for part in ks.split(",") if part.strip()})
    except ValueError:
        raise click.UsageError(f"cannot parse --ks {ks!r}")
    try:
        queries = load_queries(queries_path)
        judgments = load_qrels(qrels_path)
        if run_path:
            entries = load_run(run_path)
        else:
            kwargs = {"model": MODEL_ALIASES[model], "top_n": n}
            if lam is not None:
                kwargs["lam"] = lam
            if mu is not None:
                kwargs["mu"] = mu
            index = load_index(index_path)
            entries = run_queries(index, queries, RankingParams(**kwargs), system_name)
            if run_out_path:
                save_run(entries, run_out_path)

        by_system: dict[str, list] = {}
        for entry in entries:
            by_system.setdefault(entry.system_name, []).append(entry)
        universe = [q.query_id for q in queries]
        reports = [
            evaluate(system_entries, judgments, cutoffs, universe)
            for system_entries in by_system.values()
        ]
        if report_path:
            save_report(reports, report_path, cutoffs)
    except _ERRORS as exc:
        raise click.ClickException(str(exc))
    if fmt == "json":
        click.echo(json.dumps([rep.to_dict() for rep in reports], indent=2))
    else:
        click.echo(format_report_table(reports))


if __name__ == "__main__":
    main()
