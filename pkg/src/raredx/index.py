"""Inverted index and the collection statistics consumed by the smoothing formulas.

Postings are held per term as parallel arrays of dense document indices and
term frequencies (dense index = position in corpus order), which is the layout
the scoring kernels consume directly.
"""

from __future__ import annotations

import pickle
import struct
import time
from array import array
from bisect import bisect_left
from collections import Counter
from typing import Iterable, NamedTuple

from .corpus import Document, tokenize

MAGIC = b"RDIX"
FORMAT_VERSION = 1

_EMPTY_I = array("i")


class IndexFormatError(ValueError):
    """Raised when an index file cannot be read back."""


class Posting(NamedTuple):
    doc_id: str
    tf: int


class DocMeta(NamedTuple):
    title: str
    source: str
    url: str | None
    tags: frozenset[str]
    concept_ids: tuple[str, ...]


class Index:
    """Immutable inverted index over a document corpus.

    Built via build_index(); safe for unlimited concurrent readers.
    """

    def __init__(
        self,
        doc_ids: list[str],
        metas: list[DocMeta],
        bodies: list[str],
        doc_len: array,
        postings: dict[str, tuple[array, array]],
        collection_tf: dict[str, int],
        collection_term_count: int,
        concept_index: dict[str, list[str]],
        built_at: float,
    ):
        self.doc_ids = doc_ids
        self._idx_of = {d: i for i, d in enumerate(doc_ids)}
        self._metas = metas
        self._bodies = bodies
        self.doc_len = doc_len
        self._postings = postings
        self.collection_tf = collection_tf
        self.collection_term_count = collection_term_count
        self._concept_index = concept_index
        self.built_at = built_at
        self.rare_mask = array("b", (1 if "rare" in m.tags else 0 for m in metas))

    @property
    def doc_count(self) -> int:
        return len(self.doc_ids)

    def terms(self) -> Iterable[str]:
        return self._postings.keys()

    def has_doc(self, doc_id: str) -> bool:
        return doc_id in self._idx_of

    def dense_id(self, doc_id: str) -> int:
        try:
            return self._idx_of[doc_id]
        except KeyError:
            raise KeyError(f"unknown doc_id {doc_id!r}") from None

    def doc_length(self, doc_id: str) -> int:
        return self.doc_len[self.dense_id(doc_id)]

    def term_frequency(self, term: str, doc_id: str) -> int:
        """tf of term in the given document (0 if absent)."""
        di = self.dense_id(doc_id)
        pair = self._postings.get(term)
        if pair is None:
            return 0
        idx, tf = pair
        j = bisect_left(idx, di)
        if j < len(idx) and idx[j] == di:
            return tf[j]
        return 0

    def postings(self, term: str) -> list[Posting]:
        idx, tf = self._postings.get(term, (_EMPTY_I, _EMPTY_I))
        return [Posting(self.doc_ids[idx[j]], tf[j]) for j in range(len(idx))]

    def term_arrays(self, term: str) -> tuple[array, array]:
        """Raw (dense doc index, tf) arrays for one term; empty arrays if unseen."""
        return self._postings.get(term, (_EMPTY_I, _EMPTY_I))

    def meta(self, doc_id: str) -> DocMeta:
        return self._metas[self.dense_id(doc_id)]

    def body(self, doc_id: str) -> str:
        return self._bodies[self.dense_id(doc_id)]

    def stats(self) -> dict:
        return {
            "doc_count": self.doc_count,
            "collection_term_count": self.collection_term_count,
            "vocabulary_size": len(self._postings),
            "built_at": self.built_at,
        }


def build_index(docs: Iterable[Document]) -> Index:
    """Build the inverted index and collection statistics for a corpus.

    Title and body are indexed as one field. Deterministic: index content is
    a pure function of the document sequence.
    """
    docs = list(docs)
    if not docs:
        raise ValueError("cannot build an index from an empty corpus")

    doc_ids: list[str] = []
    metas: list[DocMeta] = []
    bodies: list[str] = []
    doc_len = array("i", bytes(4 * len(docs)))
    postings: dict[str, tuple[array, array]] = {}
    collection_tf: dict[str, int] = {}
    collection_term_count = 0
    concept_index: dict[str, list[str]] = {}
    seen: set[str] = set()

    for di, doc in enumerate(docs):
        if doc.doc_id in seen:
            raise ValueError(f"duplicate doc_id {doc.doc_id!r}")
        seen.add(doc.doc_id)
        doc_ids.append(doc.doc_id)
        metas.append(
            DocMeta(doc.title, doc.source, doc.url, frozenset(doc.tags), tuple(doc.concept_ids))
        )
        bodies.append(doc.body)

        counts = Counter(tokenize(doc.title) + tokenize(doc.body))
        doc_len[di] = sum(counts.values())
        collection_term_count += doc_len[di]
        for term, tf in counts.items():
            pair = postings.get(term)
            if pair is None:
                pair = (array("i"), array("i"))
                postings[term] = pair
            pair[0].append(di)
            pair[1].append(tf)
            collection_tf[term] = collection_tf.get(term, 0) + tf

        for cid in doc.concept_ids:
            concept_index.setdefault(cid, []).append(doc.doc_id)

    for cid in concept_index:
        concept_index[cid].sort()

    return Index(
        doc_ids=doc_ids,
        metas=metas,
        bodies=bodies,
        doc_len=doc_len,
        postings=postings,
        collection_tf=collection_tf,
        collection_term_count=collection_term_count,
        concept_index=concept_index,
        built_at=time.time(),
    )


def docs_for_concept(index: Index, concept_id: str) -> list[str]:
    """Documents carrying a concept id, ordered by doc_id; unknown id gives []."""
    return list(index._concept_index.get(concept_id, []))


def save_index(index: Index, path: str) -> None:
    """Write the index as a versioned container: magic, version, pickled payload."""
    payload = {
        "doc_ids": index.doc_ids,
        "metas": index._metas,
        "bodies": index._bodies,
        "doc_len": index.doc_len,
        "postings": index._postings,
        "collection_tf": index.collection_tf,
        "collection_term_count": index.collection_term_count,
        "concept_index": index._concept_index,
        "built_at": index.built_at,
    }
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<I", FORMAT_VERSION))
        pickle.dump(payload, fh, protocol=4)


def load_index(path: str) -> Index:
    """Read an index written by save_index; statistics round-trip bit-exactly."""
    with open(path, "rb") as fh:
        magic = fh.read(len(MAGIC))
        if magic != MAGIC:
            raise IndexFormatError(f"{path}: not an index file (bad magic)")
        head = fh.read(4)
        if len(head) < 4:
            raise IndexFormatError(f"{path}: truncated header")
        (version,) = struct.unpack("<I", head)
        if version != FORMAT_VERSION:
            raise IndexFormatError(
                f"{path}: unsupported index format version {version} (expected {FORMAT_VERSION})"
            )
        try:
            payload = pickle.load(fh)
        except Exception as exc:
            raise IndexFormatError(f"{path}: corrupt index payload ({exc})") from None
    try:
        return Index(
            doc_ids=payload["doc_ids"],
            metas=payload["metas"],
            bodies=payload["bodies"],
            doc_len=payload["doc_len"],
            postings=payload["postings"],
            collection_tf=payload["collection_tf"],
            collection_term_count=payload["collection_term_count"],
            concept_index=payload["concept_index"],
            built_at=payload["built_at"],
        )
    except (KeyError, TypeError) as exc:
        raise IndexFormatError(f"{path}: corrupt index payload ({exc})") from None
