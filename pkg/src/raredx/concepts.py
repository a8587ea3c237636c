"""Concept-based views of a ranked list: clustering and direct concept ranking.

The document-to-concept mapping arrives as a precomputed tab-separated file,
one `doc_id <TAB> concept_id <TAB> concept_name` triple per line; repeated
doc_id lines accumulate.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ranking import RankedList

UNMAPPED_ID = "unmapped"


class MappingFormatError(ValueError):
    """Raised for malformed or inconsistent mapping files."""


class ConceptMapping:
    """Bidirectional document/concept association with one name per concept."""

    def __init__(self) -> None:
        self.by_doc: dict[str, list[tuple[str, str]]] = {}
        self.by_concept: dict[str, tuple[str, list[str]]] = {}

    @classmethod
    def from_triples(cls, triples) -> "ConceptMapping":
        """Build from (doc_id, concept_id, concept_name) triples.

        Exact repeats are idempotent; a second name for a known concept_id
        is an error.
        """
        mapping = cls()
        for doc_id, cid, name in triples:
            mapping._add(doc_id, cid, name)
        mapping._finalize()
        return mapping

    def _add(self, doc_id: str, cid: str, name: str) -> None:
        if not doc_id:
            raise MappingFormatError("empty doc_id")
        if not cid:
            raise MappingFormatError("empty concept_id")
        known = self.by_concept.get(cid)
        if known is not None and known[0] != name:
            raise MappingFormatError(
                f"conflicting names for concept {cid!r}: {known[0]!r} vs {name!r}"
            )
        pairs = self.by_doc.setdefault(doc_id, [])
        if (cid, name) not in pairs:
            pairs.append((cid, name))
        if known is None:
            self.by_concept[cid] = (name, [doc_id])
        elif doc_id not in known[1]:
            known[1].append(doc_id)

    def _finalize(self) -> None:
        for name, doc_list in self.by_concept.values():
            doc_list.sort()

    def concepts_for(self, doc_id: str) -> list[tuple[str, str]]:
        return list(self.by_doc.get(doc_id, []))

    def docs_for(self, concept_id: str) -> list[str]:
        entry = self.by_concept.get(concept_id)
        return list(entry[1]) if entry else []

    def name_of(self, concept_id: str) -> str | None:
        entry = self.by_concept.get(concept_id)
        return entry[0] if entry else None

    def __len__(self) -> int:
        return len(self.by_concept)


def load_mapping(path: str) -> ConceptMapping:
    """Read a mapping file; errors carry the offending line number."""
    mapping = ConceptMapping()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\r\n")
            if not line:
                continue
            parts = line.split("\t", 2)
            if len(parts) != 3:
                raise MappingFormatError(
                    f"{path}: line {lineno}: expected 'doc_id<TAB>concept_id<TAB>name'"
                )
            try:
                mapping._add(*parts)
            except MappingFormatError as exc:
                raise MappingFormatError(f"{path}: line {lineno}: {exc}") from None
    mapping._finalize()
    return mapping


@dataclass
class ConceptCluster:
    concept_id: str
    concept_name: str
    representative: tuple[str, int]  # (doc_id, original rank)
    members: list[tuple[str, int]]  # rank ascending


@dataclass
class ConceptScore:
    concept_id: str
    concept_name: str
    score: float
    contributing_docs: list[tuple[str, int]]


def _group_by_concept(ranked: RankedList, mapping: ConceptMapping):
    """(concept -> members in rank order, unmapped members in rank order)."""
    groups: dict[str, list[tuple[str, int]]] = {}
    unmapped: list[tuple[str, int]] = []
    for entry in sorted(ranked.entries, key=lambda e: e.rank):
        pairs = mapping.concepts_for(entry.doc_id)
        if not pairs:
            unmapped.append((entry.doc_id, entry.rank))
            continue
        for cid, _name in pairs:
            groups.setdefault(cid, []).append((entry.doc_id, entry.rank))
    return groups, unmapped


def cluster_by_concept(ranked: RankedList, mapping: ConceptMapping) -> list[ConceptCluster]:
    """Group a ranked list (already truncated to the top j) by concept.

    One cluster per concept with members in the list, represented by its
    highest-ranked member; clusters ordered by representative rank, ties by
    concept_id. A document with several concepts joins each of their
    clusters. Unmapped documents form a trailing "unmapped" pseudo-cluster.
    """
    groups, unmapped = _group_by_concept(ranked, mapping)
    clusters = [
        ConceptCluster(cid, mapping.name_of(cid) or cid, members[0], members)
        for cid, members in groups.items()
    ]
    clusters.sort(key=lambda c: (c.representative[1], c.concept_id))
    if unmapped:
        clusters.append(ConceptCluster(UNMAPPED_ID, UNMAPPED_ID, unmapped[0], unmapped))
    return clusters


def rank_concepts(ranked: RankedList, mapping: ConceptMapping) -> list[ConceptScore]:
    """Score concepts over the top-j list: member count plus reciprocal ranks.

    Sorted by score descending, ties by best member rank then concept_id.
    Unmapped documents do not participate.
    """
    groups, _unmapped = _group_by_concept(ranked, mapping)
    scored = []
    for cid, members in groups.items():
        score = float(len(members))
        for _doc_id, rank in members:
            score += 1.0 / rank
        scored.append(ConceptScore(cid, mapping.name_of(cid) or cid, score, members))
    scored.sort(key=lambda c: (-c.score, c.contributing_docs[0][1], c.concept_id))
    return scored
