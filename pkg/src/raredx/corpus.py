"""Document model, corpus file IO, and the shared tokenizer.

The corpus file format is JSON lines: one flat object per line with keys
``doc_id`` (required), ``title`` (required), ``body``, ``source``, ``url``,
``concept_ids`` and ``tags``, UTF-8 encoded.
"""

from __future__ import annotations

import json
import re
import unicodedata
from dataclasses import dataclass, field


class CorpusFormatError(ValueError):
    """Raised for invalid corpus records or corpus files."""


# Alphanumeric runs: every character that is not a letter or digit is a
# split point. \w minus underscore matches exactly the isalnum() characters.
_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)

_RECORD_KEYS = {"doc_id", "title", "body", "source", "url", "concept_ids", "tags"}


def tokenize(text: str) -> list[str]:
    """Split text into lowercase tokens.

    The text is NFC-normalized and lowercased, then split on every
    character that is not a letter or digit. Empty fragments are dropped.
    No stemming, no stopword removal.
    """
    return _TOKEN_RE.findall(unicodedata.normalize("NFC", text).lower())


@dataclass
class Document:
    """One curated disease article.

    ``tags`` distinguishes collection membership (at minimum "rare" vs
    "genetic"); ``concept_ids`` carries medical concept identifiers
    attached to the document, possibly empty.
    """

    doc_id: str
    title: str
    body: str = ""
    source: str = ""
    url: str | None = None
    concept_ids: list[str] = field(default_factory=list)
    tags: set[str] = field(default_factory=set)

    def __post_init__(self) -> None:
        if not self.doc_id:
            raise CorpusFormatError("doc_id must be non-empty")
        if not self.title:
            raise CorpusFormatError(f"document {self.doc_id!r}: title must be non-empty")
        if len(set(self.concept_ids)) != len(self.concept_ids):
            raise CorpusFormatError(f"document {self.doc_id!r}: duplicate concept_ids")

    @classmethod
    def from_record(cls, rec: object) -> "Document":
        """Build a Document from one parsed corpus-file record."""
        if not isinstance(rec, dict):
            raise CorpusFormatError("record is not a JSON object")
        unknown = set(rec) - _RECORD_KEYS
        if unknown:
            raise CorpusFormatError(f"unknown keys {sorted(unknown)}")
        for key in ("doc_id", "title"):
            if key not in rec:
                raise CorpusFormatError(f"missing required key {key!r}")
        for key in ("doc_id", "title", "body", "source"):
            if key in rec and not isinstance(rec[key], str):
                raise CorpusFormatError(f"key {key!r} must be a string")
        url = rec.get("url")
        if url is not None and not isinstance(url, str):
            raise CorpusFormatError("key 'url' must be a string")
        for key in ("concept_ids", "tags"):
            val = rec.get(key, [])
            if not isinstance(val, list) or not all(isinstance(v, str) for v in val):
                raise CorpusFormatError(f"key {key!r} must be an array of strings")
        return cls(
            doc_id=rec["doc_id"],
            title=rec["title"],
            body=rec.get("body", ""),
            source=rec.get("source", ""),
            url=url,
            concept_ids=list(rec.get("concept_ids", [])),
            tags=set(rec.get("tags", [])),
        )

    def to_record(self) -> dict:
        """Inverse of from_record; tags are serialized sorted for determinism."""
        rec: dict = {
            "doc_id": self.doc_id,
            "title": self.title,
            "body": self.body,
            "source": self.source,
        }
        if self.url is not None:
            rec["url"] = self.url
        rec["concept_ids"] = list(self.concept_ids)
        rec["tags"] = sorted(self.tags)
        return rec


def load_corpus(path: str) -> list[Document]:
    """Read a JSON-lines corpus file.

    Returns documents in file order. Raises CorpusFormatError naming the
    offending line for malformed records and duplicate doc_ids.
    """
    docs: list[Document] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusFormatError(f"{path}: line {lineno}: invalid JSON ({exc.msg})") from None
            try:
                doc = Document.from_record(rec)
            except CorpusFormatError as exc:
                raise CorpusFormatError(f"{path}: line {lineno}: {exc}") from None
            if doc.doc_id in seen:
                raise CorpusFormatError(f"{path}: line {lineno}: duplicate doc_id {doc.doc_id!r}")
            seen.add(doc.doc_id)
            docs.append(doc)
    return docs


def save_corpus(docs: list[Document], path: str) -> None:
    """Write documents as JSON lines; load_corpus(save_corpus(docs)) round-trips all fields."""
    with open(path, "w", encoding="utf-8") as fh:
        for doc in docs:
            fh.write(json.dumps(doc.to_record(), ensure_ascii=False) + "\n")
