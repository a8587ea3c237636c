"""HTTP search service over an immutable index snapshot.

Request handlers read the snapshot reference once, so a concurrent reload
(SIGHUP or POST /api/reload) swaps in a fresh snapshot atomically without
affecting in-flight requests.
"""

from __future__ import annotations

import signal
import threading
import time
from dataclasses import dataclass

from fastapi import FastAPI
from fastapi import Query as QueryParam
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import _kernels
from .concepts import ConceptMapping, cluster_by_concept, load_mapping, rank_concepts
from .corpus import tokenize
from .index import Index, load_index
from .ranking import (
    DIRICHLET,
    JELINEK_MERCER,
    UNMATCHABLE,
    EmptyQueryError,
    Query,
    RankedEntry,
    RankedList,
    RankingParams,
    search,
)

MODES = ("documents", "clusters", "concepts")
BY_VALUES = ("text", "concept")
MODEL_ALIASES = {
    "jm": JELINEK_MERCER,
    "jelinek_mercer": JELINEK_MERCER,
    "jelinek-mercer": JELINEK_MERCER,
    "dirichlet": DIRICHLET,
}
CORPUS_ALIASES = {"all": "all", "rare": "rare_only", "rare_only": "rare_only"}

SNIPPET_WIDTH = 40


class SearchParamError(ValueError):
    """Raised for malformed search parameters."""


@dataclass
class Snapshot:
    index: Index
    mapping: ConceptMapping
    index_path: str | None = None
    mapping_path: str | None = None
    loaded_at: float = 0.0


def load_snapshot(index_path: str, mapping_path: str | None) -> Snapshot:
    index = load_index(index_path)
    mapping = load_mapping(mapping_path) if mapping_path else ConceptMapping()
    return Snapshot(index, mapping, index_path, mapping_path, loaded_at=time.time())


def best_snippet(body: str, query_terms, width: int = SNIPPET_WIDTH) -> str:
    """Smallest window of at most `width` body tokens with the most distinct
    query terms; falls back to the first `width` tokens."""
    tokens = tokenize(body)
    if not tokens:
        return ""
    qset = set(query_terms)
    window = min(width, len(tokens))

    # Best achievable distinct count in any window of `window` tokens.
    counts: dict[str, int] = {}
    distinct = 0
    best_count = 0
    for right, tok in enumerate(tokens):
        if tok in qset:
            counts[tok] = counts.get(tok, 0) + 1
            if counts[tok] == 1:
                distinct += 1
        if right >= window:
            out = tokens[right - window]
            if out in qset:
                counts[out] -= 1
                if counts[out] == 0:
                    distinct -= 1
        if distinct > best_count:
            best_count = distinct
    if best_count == 0:
        return " ".join(tokens[:window])

    # Smallest window containing best_count distinct query terms.
    counts = {}
    distinct = 0
    left = 0
    best = (len(tokens) + 1, 0)
    for right, tok in enumerate(tokens):
        if tok in qset:
            counts[tok] = counts.get(tok, 0) + 1
            if counts[tok] == 1:
                distinct += 1
        while distinct == best_count:
            size = right - left + 1
            if size < best[0]:
                best = (size, left)
            out = tokens[left]
            left += 1
            if out in qset:
                counts[out] -= 1
                if counts[out] == 0:
                    distinct -= 1
    size, start = best
    return " ".join(tokens[start : start + size])


def _render_score(score: float | None) -> float | None:
    if score is None or score == UNMATCHABLE:
        return None
    return score


def _parse_params(mode, by, model, lam, mu, n, j, corpus):
    if mode not in MODES:
        raise SearchParamError(f"mode must be one of {', '.join(MODES)}")
    if by not in BY_VALUES:
        raise SearchParamError(f"by must be one of {', '.join(BY_VALUES)}")
    model_key = MODEL_ALIASES.get(str(model).lower())
    if model_key is None:
        raise SearchParamError("model must be one of jm, dirichlet")
    corpus_key = CORPUS_ALIASES.get(str(corpus).lower())
    if corpus_key is None:
        raise SearchParamError("corpus must be one of all, rare")
    if n < 1 or j < 1:
        raise SearchParamError("n and j must be at least 1")
    kwargs = {"model": model_key, "top_n": n if mode == "documents" else j, "corpus_filter": corpus_key}
    if lam is not None:
        kwargs["lam"] = lam
    if mu is not None:
        kwargs["mu"] = mu
    try:
        return RankingParams(**kwargs)
    except ValueError as exc:
        raise SearchParamError(str(exc)) from None


def execute_search(
    snapshot: Snapshot,
    q: str,
    mode: str = "documents",
    by: str = "text",
    model: str = "dirichlet",
    lam: float | None = None,
    mu: float | None = None,
    n: int = 20,
    j: int = 50,
    corpus: str = "all",
) -> dict:
    """Run one search and shape the response payload.

    Shared by the HTTP handler and the CLI so both emit the same payload.
    """
    started = time.perf_counter()
    if not q or not q.strip():
        raise EmptyQueryError("empty query")
    params = _parse_params(mode, by, model, lam, mu, n, j, corpus)

    index = snapshot.index
    concept_query = by == "concept"
    if concept_query:
        # Membership is determined by the loaded concept mapping.
        doc_ids = snapshot.mapping.docs_for(q.strip())
        entries = [
            RankedEntry(doc_id, 0.0, rank)
            for rank, doc_id in enumerate(doc_ids[: params.top_n], 1)
        ]
        ranked = RankedList(None, entries)
        query_terms: list[str] = []
    else:
        ranked = search(index, Query(q), params)
        query_terms = tokenize(q)

    score_of = {e.doc_id: e.score for e in ranked.entries}

    def doc_cell(doc_id: str, rank: int, with_score: bool = True) -> dict:
        meta = index.meta(doc_id)
        cell = {"doc_id": doc_id, "rank": rank, "title": meta.title}
        if with_score:
            cell["score"] = None if concept_query else _render_score(score_of.get(doc_id))
        return cell

    if mode == "documents":
        results = []
        for e in ranked.entries:
            meta = index.meta(e.doc_id)
            results.append(
                {
                    "doc_id": e.doc_id,
                    "rank": e.rank,
                    "title": meta.title,
                    "source": meta.source,
                    "url": meta.url,
                    "snippet": best_snippet(index.body(e.doc_id), query_terms),
                    "score": None if concept_query else _render_score(e.score),
                }
            )
    elif mode == "clusters":
        results = []
        for cluster in cluster_by_concept(ranked, snapshot.mapping):
            results.append(
                {
                    "concept_id": cluster.concept_id,
                    "concept_name": cluster.concept_name,
                    "size": len(cluster.members),
                    "representative": doc_cell(*cluster.representative, with_score=False),
                    "members": [doc_cell(d, r) for d, r in cluster.members],
                }
            )
    else:
        results = []
        for cs in rank_concepts(ranked, snapshot.mapping):
            results.append(
                {
                    "concept_id": cs.concept_id,
                    "concept_name": cs.concept_name,
                    "score": cs.score,
                    "contributing_docs": [doc_cell(d, r) for d, r in cs.contributing_docs],
                }
            )

    elapsed_ms = (time.perf_counter() - started) * 1000.0
    return {"query_echo": q, "mode": mode, "elapsed_ms": round(elapsed_ms, 3), "results": results}


def create_app(snapshot: Snapshot, static_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="raredx search service")
    app.state.snapshot = snapshot
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    @app.exception_handler(RequestValidationError)
    async def _bad_request(request, exc):
        return JSONResponse(status_code=400, content={"error": f"malformed request: {exc.errors()[0]['loc'][-1]}"})

    @app.get("/api/search")
    def api_search(
        q: str = "",
        mode: str = "documents",
        by: str = "text",
        model: str = "dirichlet",
        lam: float | None = QueryParam(default=None, alias="lambda"),
        mu: float | None = None,
        n: int = 20,
        j: int = 50,
        corpus: str = "all",
    ):
        snap = app.state.snapshot
        try:
            return execute_search(
                snap, q, mode=mode, by=by, model=model, lam=lam, mu=mu, n=n, j=j, corpus=corpus
            )
        except (EmptyQueryError, SearchParamError, ValueError) as exc:
            return JSONResponse(status_code=400, content={"error": str(exc)})

    @app.get("/api/doc/{doc_id}")
    def api_doc(doc_id: str):
        snap = app.state.snapshot
        if not snap.index.has_doc(doc_id):
            return JSONResponse(status_code=404, content={"error": f"unknown document {doc_id}"})
        meta = snap.index.meta(doc_id)
        return {
            "doc_id": doc_id,
            "title": meta.title,
            "body": snap.index.body(doc_id),
            "source": meta.source,
            "url": meta.url,
            "tags": sorted(meta.tags),
            "concept_ids": list(meta.concept_ids),
        }

    @app.get("/api/health")
    def api_health():
        snap = app.state.snapshot
        stats = snap.index.stats()
        return {
            "status": "ok",
            "doc_count": stats["doc_count"],
            "collection_term_count": stats["collection_term_count"],
            "built_at": stats["built_at"],
            "loaded_at": snap.loaded_at,
            "kernel": _kernels.active.NAME,
        }

    @app.post("/api/reload")
    def api_reload():
        snap = app.state.snapshot
        if not snap.index_path:
            return JSONResponse(
                status_code=400, content={"error": "snapshot is not backed by files"}
            )
        app.state.snapshot = load_snapshot(snap.index_path, snap.mapping_path)
        return {"status": "reloaded", "doc_count": app.state.snapshot.index.doc_count}

    if static_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app


def serve(
    index_path: str,
    mapping_path: str | None,
    port: int = 8080,
    host: str = "127.0.0.1",
    static_dir: str | None = None,
) -> None:
    """Load a snapshot and serve it; SIGHUP reloads it with zero dropped requests."""
    import uvicorn

    snapshot = load_snapshot(index_path, mapping_path)
    app = create_app(snapshot, static_dir=static_dir)

    def _reload(signum=None, frame=None):
        def work():
            app.state.snapshot = load_snapshot(index_path, mapping_path)

        threading.Thread(target=work, daemon=True).start()

    try:
        signal.signal(signal.SIGHUP, _reload)
    except (AttributeError, ValueError):
        pass  # no SIGHUP on this platform or not the main thread
    uvicorn.run(app, host=host, port=port, log_level="warning")
