"""raredx: a vertical search engine for rare-disease diagnostic queries.

Inverted-index retrieval with query-likelihood ranking (Jelinek-Mercer and
Dirichlet smoothing), concept-based result clustering and concept ranking,
and an IR evaluation harness (P@k, MRR, answered@k).
"""

from .concepts import (
    ConceptCluster,
    ConceptMapping,
    ConceptScore,
    MappingFormatError,
    cluster_by_concept,
    load_mapping,
    rank_concepts,
)
from .corpus import CorpusFormatError, Document, load_corpus, save_corpus, tokenize
from .evaluation import (
    EvalReport,
    Judgment,
    RunEntry,
    evaluate,
    load_qrels,
    load_queries,
    load_run,
    precision_at_k,
    reciprocal_rank,
    run_queries,
    save_run,
)
from .index import (
    Index,
    IndexFormatError,
    Posting,
    build_index,
    docs_for_concept,
    load_index,
    save_index,
)
from .ranking import (
    DIRICHLET,
    JELINEK_MERCER,
    UNMATCHABLE,
    EmptyQueryError,
    Query,
    RankedEntry,
    RankedList,
    RankingParams,
    score_document,
    search,
    term_prob_dirichlet,
    term_prob_jm,
)

__version__ = "0.1.0"
