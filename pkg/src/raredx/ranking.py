"""Query-likelihood ranking with Jelinek-Mercer and Dirichlet smoothing.

Scores are sums of log term probabilities. A query term with probability
exactly zero for a document makes that document UNMATCHABLE: it stays in
the ranking but sorts below every finite score.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from . import _kernels
from .corpus import tokenize
from .index import Index

JELINEK_MERCER = "jelinek_mercer"
DIRICHLET = "dirichlet"

UNMATCHABLE = float("-inf")

SOURCE_TAGS = ("HLJ", "OJRD", "BMJ", "other")


class EmptyQueryError(ValueError):
    """Raised when a query tokenizes to nothing."""


@dataclass
class Query:
    text: str
    query_id: str | None = None
    source_tag: str | None = None

    def __post_init__(self) -> None:
        if self.source_tag is not None and self.source_tag not in SOURCE_TAGS:
            raise ValueError(f"unknown source_tag {self.source_tag!r}")


@dataclass
class RankingParams:
    model: str = DIRICHLET
    lam: float = 0.9
    mu: float = 2500.0
    top_n: int = 20
    corpus_filter: str = "all"

    def __post_init__(self) -> None:
        if self.model not in (JELINEK_MERCER, DIRICHLET):
            raise ValueError(f"unknown model {self.model!r}")
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError("lambda must lie in [0, 1]")
        if self.mu <= 0.0:
            raise ValueError("mu must be positive")
        if self.top_n < 1:
            raise ValueError("top_n must be at least 1")
        if self.corpus_filter not in ("all", "rare_only"):
            raise ValueError(f"unknown corpus_filter {self.corpus_filter!r}")


class RankedEntry(NamedTuple):
    doc_id: str
    score: float
    rank: int


@dataclass
class RankedList:
    query_id: str | None
    entries: list[RankedEntry]

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def doc_ids(self) -> list[str]:
        return [e.doc_id for e in self.entries]


def term_prob_jm(term: str, doc_id: str, index: Index, lam: float) -> float:
    """One Jelinek-Mercer factor: (1-lam)*tf/|D| + lam*cq/|C|."""
    if not 0.0 <= lam <= 1.0:
        raise ValueError("lambda must lie in [0, 1]")
    dl = index.doc_length(doc_id)
    tf = index.term_frequency(term, doc_id)
    cq = index.collection_tf.get(term, 0)
    ml = (tf / dl) if dl else 0.0
    return (1.0 - lam) * ml + lam * (cq / index.collection_term_count)


def term_prob_dirichlet(term: str, doc_id: str, index: Index, mu: float) -> float:
    """One Dirichlet factor: (tf + mu*cq/|C|) / (|D| + mu)."""
    if mu <= 0.0:
        raise ValueError("mu must be positive")
    dl = index.doc_length(doc_id)
    tf = index.term_frequency(term, doc_id)
    cq = index.collection_tf.get(term, 0)
    return (tf + mu * (cq / index.collection_term_count)) / (dl + mu)


def _token_counts(text: str) -> dict[str, int]:
    """Unique query tokens in first-occurrence order with multiplicities."""
    counts: dict[str, int] = {}
    for tok in tokenize(text):
        counts[tok] = counts.get(tok, 0) + 1
    return counts


def score_document(query: Query, doc_id: str, index: Index, params: RankingParams) -> float:
    """Log query likelihood of one document, or UNMATCHABLE on a zero factor.

    Reference scalar path; the kernels reproduce it bit-for-bit.
    """
    counts = _token_counts(query.text)
    if not counts:
        raise EmptyQueryError("empty query")
    score = 0.0
    for term, mult in counts.items():
        if params.model == JELINEK_MERCER:
            p = term_prob_jm(term, doc_id, index, params.lam)
        else:
            p = term_prob_dirichlet(term, doc_id, index, params.mu)
        if p <= 0.0:
            return UNMATCHABLE
        score += mult * math.log(p)
    return score


def search(index: Index, query: Query, params: RankingParams | None = None, kernel=None) -> RankedList:
    """Rank documents containing at least one query term.

    Sorted by score descending, ties broken by doc_id ascending, truncated
    to params.top_n. corpus_filter="rare_only" restricts candidates to
    documents tagged "rare".
    """
    if params is None:
        params = RankingParams()
    counts = _token_counts(query.text)
    if not counts:
        raise EmptyQueryError("empty query")

    terms = []
    for term, mult in counts.items():
        idx_arr, tf_arr = index.term_arrays(term)
        terms.append((mult, index.collection_tf.get(term, 0), idx_arr, tf_arr))

    mask = index.rare_mask if params.corpus_filter == "rare_only" else None
    kern = kernel if kernel is not None else _kernels.active
    cand, scores = kern.score_candidates(
        index.doc_count,
        index.doc_len,
        terms,
        mask,
        kern.JM if params.model == JELINEK_MERCER else kern.DIRICHLET,
        params.lam,
        params.mu,
        index.collection_term_count,
    )

    doc_ids = index.doc_ids
    order = sorted(range(len(cand)), key=lambda i: (-scores[i], doc_ids[cand[i]]))
    entries = [
        RankedEntry(doc_ids[cand[i]], scores[i], rank)
        for rank, i in enumerate(order[: params.top_n], 1)
    ]
    return RankedList(query.query_id, entries)
