"""IR evaluation harness: P@k, MRR, answered@k over runs and binary judgments.

File formats (UTF-8, tab-separated):
  queries: query_id <TAB> source_tag <TAB> query text
  qrels:   query_id <TAB> doc_id <TAB> 0|1
  runs:    query_id <TAB> doc_id <TAB> rank <TAB> score <TAB> system_name
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from .index import Index
from .ranking import Query, RankingParams, search


@dataclass(frozen=True)
class Judgment:
    query_id: str
    doc_id: str
    relevant: bool


class RunEntry(NamedTuple):
    query_id: str
    doc_id: str
    rank: int
    score: float
    system_name: str


@dataclass
class PerQueryResult:
    query_id: str
    first_relevant_rank: int | None
    p_at: dict[int, float]


@dataclass
class EvalReport:
    system_name: str
    n_queries: int
    mrr: float
    p_at: dict[int, float]
    answered_at: dict[int, int]
    unjudged_retrieved: int
    per_query: list[PerQueryResult]

    def answered_pct(self, k: int) -> float:
        if self.n_queries == 0:
            return 0.0
        return round(100.0 * self.answered_at[k] / self.n_queries, 1)

    def to_dict(self) -> dict:
        """Flat machine-readable form, one p_at_K / answered_at_K pair per cutoff."""
        out: dict = {
            "system_name": self.system_name,
            "n_queries": self.n_queries,
            "mrr": self.mrr,
            "unjudged_retrieved": self.unjudged_retrieved,
        }
        for k in sorted(self.p_at):
            out[f"p_at_{k}"] = self.p_at[k]
        for k in sorted(self.answered_at):
            out[f"answered_at_{k}"] = self.answered_at[k]
            out[f"answered_at_{k}_pct"] = self.answered_pct(k)
        out["per_query"] = [
            {
                "query_id": pq.query_id,
                "first_relevant_rank": pq.first_relevant_rank,
                **{f"p_at_{k}": v for k, v in sorted(pq.p_at.items())},
            }
            for pq in self.per_query
        ]
        return out


def precision_at_k(ranked_doc_ids: Sequence[str], relevant: set[str], k: int) -> float:
    """Fraction of the top k that is relevant; the denominator is always k."""
    if k < 1:
        raise ValueError("k must be at least 1")
    hits = sum(1 for d in ranked_doc_ids[:k] if d in relevant)
    return hits / k


def reciprocal_rank(ranked_doc_ids: Sequence[str], relevant: set[str]) -> float:
    """1/rank of the first relevant retrieved document, 0.0 if none."""
    for pos, doc_id in enumerate(ranked_doc_ids, 1):
        if doc_id in relevant:
            return 1.0 / pos
    return 0.0


def _relevance_table(judgments: Iterable[Judgment]) -> dict[str, dict[str, bool]]:
    table: dict[str, dict[str, bool]] = {}
    for j in judgments:
        per_query = table.setdefault(j.query_id, {})
        if j.doc_id in per_query:
            raise ValueError(f"duplicate judgment for ({j.query_id!r}, {j.doc_id!r})")
        per_query[j.doc_id] = j.relevant
    return table


def _runs_by_query(run: Iterable[RunEntry]) -> tuple[dict[str, list[RunEntry]], str]:
    by_query: dict[str, list[RunEntry]] = {}
    system = ""
    for entry in run:
        if system and entry.system_name != system:
            raise ValueError(
                f"run mixes systems {system!r} and {entry.system_name!r}; evaluate one at a time"
            )
        system = entry.system_name
        by_query.setdefault(entry.query_id, []).append(entry)

    for query_id, entries in by_query.items():
        entries.sort(key=lambda e: e.rank)
        ranks = [e.rank for e in entries]
        if ranks != list(range(1, len(entries) + 1)):
            raise ValueError(f"query {query_id!r}: ranks must be contiguous from 1")
        if len({e.doc_id for e in entries}) != len(entries):
            raise ValueError(f"query {query_id!r}: duplicate doc_id in run")
        for prev, cur in zip(entries, entries[1:]):
            if cur.score > prev.score:
                raise ValueError(f"query {query_id!r}: scores increase with rank")
    return by_query, system


def evaluate(
    run: Iterable[RunEntry],
    judgments: Iterable[Judgment],
    ks: Sequence[int] = (10, 20),
    query_ids: Sequence[str] | None = None,
) -> EvalReport:
    """Macro-average P@k, MRR and answered@k over the query universe.

    The universe is query_ids when given (the queries file), otherwise every
    query_id seen in the run or the judgments; queries with no retrieved
    documents still count in N. Unjudged retrieved documents count as
    non-relevant and are tallied in the report.
    """
    ks = sorted(set(int(k) for k in ks))
    if not ks or ks[0] < 1:
        raise ValueError("ks must contain positive cutoffs")

    by_query, system = _runs_by_query(run)
    table = _relevance_table(judgments)
    if query_ids is not None:
        universe = list(dict.fromkeys(query_ids))
        missing = set(by_query) - set(universe)
        if missing:
            raise ValueError(f"run contains queries outside the universe: {sorted(missing)}")
    else:
        universe = sorted(set(by_query) | set(table))

    unjudged = 0
    per_query: list[PerQueryResult] = []
    answered_at = {k: 0 for k in ks}
    mrr_total = 0.0
    p_totals = {k: 0.0 for k in ks}

    for query_id in universe:
        ranked = [e.doc_id for e in by_query.get(query_id, [])]
        judged = table.get(query_id, {})
        relevant = {d for d, rel in judged.items() if rel}
        unjudged += sum(1 for d in ranked if d not in judged)

        first_rank: int | None = None
        for pos, doc_id in enumerate(ranked, 1):
            if doc_id in relevant:
                first_rank = pos
                break
        p_at = {k: precision_at_k(ranked, relevant, k) for k in ks}

        per_query.append(PerQueryResult(query_id, first_rank, p_at))
        if first_rank is not None:
            mrr_total += 1.0 / first_rank
            for k in ks:
                if first_rank <= k:
                    answered_at[k] += 1
        for k in ks:
            p_totals[k] += p_at[k]

    n = len(universe)
    return EvalReport(
        system_name=system,
        n_queries=n,
        mrr=mrr_total / n if n else 0.0,
        p_at={k: p_totals[k] / n if n else 0.0 for k in ks},
        answered_at=answered_at,
        unjudged_retrieved=unjudged,
        per_query=per_query,
    )


def run_queries(
    index: Index, queries: Sequence[Query], params: RankingParams, system_name: str
) -> list[RunEntry]:
    """Search every query and serialize the rankings as run entries."""
    if not queries:
        raise ValueError("no queries to run")
    entries: list[RunEntry] = []
    for query in queries:
        if not query.query_id:
            raise ValueError("run_queries requires every query to carry a query_id")
        ranked = search(index, query, params)
        entries.extend(
            RunEntry(query.query_id, e.doc_id, e.rank, e.score, system_name) for e in ranked
        )
    return entries


# ---------------------------------------------------------------------------
# File IO


def load_queries(path: str) -> list[Query]:
    queries = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            parts = line.split("\t", 2)
            if len(parts) != 3:
                raise ValueError(f"{path}: line {lineno}: expected 'query_id<TAB>source_tag<TAB>text'")
            query_id, tag, text = parts
            tag = tag.strip().upper()
            source_tag = tag if tag in ("HLJ", "OJRD", "BMJ") else "other"
            queries.append(Query(text=text, query_id=query_id, source_tag=source_tag))
    return queries


def load_qrels(path: str) -> list[Judgment]:
    judgments = []
    seen: set[tuple[str, str]] = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 3 or parts[2] not in ("0", "1"):
                raise ValueError(f"{path}: line {lineno}: expected 'query_id<TAB>doc_id<TAB>0|1'")
            key = (parts[0], parts[1])
            if key in seen:
                raise ValueError(f"{path}: line {lineno}: duplicate judgment for {key!r}")
            seen.add(key)
            judgments.append(Judgment(parts[0], parts[1], parts[2] == "1"))
    return judgments


def load_run(path: str) -> list[RunEntry]:
    entries = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) != 5:
                raise ValueError(
                    f"{path}: line {lineno}: expected 'query_id<TAB>doc_id<TAB>rank<TAB>score<TAB>system'"
                )
            try:
                rank = int(parts[2])
                score = float(parts[3])
            except ValueError:
                raise ValueError(f"{path}: line {lineno}: bad rank or score") from None
            entries.append(RunEntry(parts[0], parts[1], rank, score, parts[4]))
    return entries


def save_run(entries: Iterable[RunEntry], path: str) -> None:
    """Write a run file; repr() keeps float scores byte-stable across runs."""
    with open(path, "w", encoding="utf-8") as fh:
        for e in entries:
            fh.write(f"{e.query_id}\t{e.doc_id}\t{e.rank}\t{e.score!r}\t{e.system_name}\n")


def answered_matrix(reports: Sequence[EvalReport], k: int) -> dict:
    """Binary answered/unanswered matrix across systems at cutoff k.

    Rows follow the first report's query order; every report must cover the
    same universe.
    """
    if not reports:
        raise ValueError("no reports")
    query_ids = [pq.query_id for pq in reports[0].per_query]
    matrix = []
    for qid in query_ids:
        row = []
        for rep in reports:
            pq = next((p for p in rep.per_query if p.query_id == qid), None)
            if pq is None:
                raise ValueError(f"system {rep.system_name!r} is missing query {qid!r}")
            row.append(1 if pq.first_relevant_rank is not None and pq.first_relevant_rank <= k else 0)
        matrix.append(row)
    return {
        "k": k,
        "query_ids": query_ids,
        "systems": [rep.system_name for rep in reports],
        "matrix": matrix,
    }


def save_report(reports: Sequence[EvalReport], path: str, ks: Sequence[int] = (10, 20)) -> None:
    """Write the machine-readable report: per-system metrics plus the matrix."""
    payload = {
        "ks": sorted(set(int(k) for k in ks)),
        "systems": [rep.to_dict() for rep in reports],
        "answered_matrix": answered_matrix(reports, max(ks)),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=False)
        fh.write("\n")


def format_report_table(reports: Sequence[EvalReport]) -> str:
    """Human-readable comparison table, one row per system."""
    if not reports:
        return "(no systems evaluated)"
    ks = sorted(reports[0].p_at)
    header = ["System", "N", "MRR"]
    header += [f"P@{k}" for k in ks]
    header += [f"answered@{k}" for k in ks]
    rows = [header]
    for rep in reports:
        row = [rep.system_name or "-", str(rep.n_queries), f"{rep.mrr:.4f}"]
        row += [f"{rep.p_at[k]:.4f}" for k in ks]
        row += [f"{rep.answered_at[k]} ({rep.answered_pct(k)}%)" for k in ks]
        rows.append(row)
    widths = [max(len(r[i]) for r in rows) for i in range(len(header))]
    lines = []
    for i, row in enumerate(rows):
        lines.append("  ".join(cell.ljust(widths[j]) for j, cell in enumerate(row)).rstrip())
        if i == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines)
