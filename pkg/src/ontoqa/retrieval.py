"""Conceptual inverted index and TF-IDF retrieval.

Documents and queries are mapped into concepts: synonym classes built
from ontology synonym_of triples, with a fresh singleton concept for
every lemma first seen at indexing time. With an empty ontology this
degrades to plain lemma keyword retrieval; synonym triples widen each
concept's member set and therefore the retrievable document set.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

from .analysis import AnalyzedSentence, CONTENT_TAGS
from .ontology import Ontology

SNAPSHOT_FORMAT = "ontoqa-index"
SNAPSHOT_VERSION = 1

UNKNOWN_CONCEPT = -1


class DuplicateDocument(ValueError):
    def __init__(self, doc_id: str):
        super().__init__(f"document '{doc_id}' is already indexed")
        self.doc_id = doc_id


class SnapshotError(ValueError):
    """The index snapshot file is missing, malformed or incompatible."""


@dataclass(frozen=True)
class Concept:
    id: int
    canonical: str
    members: frozenset[str]


@dataclass(frozen=True)
class Posting:
    doc_id: str
    sentence_ordinal: int
    token_position: int
    term_frequency: int  # of the concept within the document


class ConceptIndex:
    """Concept table plus postings, document texts and frequencies."""

    def __init__(self, ontology: Ontology | None = None):
        self.concepts: dict[int, Concept] = {}
        self._concept_of: dict[str, int] = {}
        self._postings: dict[int, list[Posting]] = {}
        self.documents: dict[str, list[str]] = {}
        self._next_id = 0
        if ontology is not None:
            self._build_synonym_concepts(ontology)

    # -- concept table ---------------------------------------------------

    def _build_synonym_concepts(self, ontology: Ontology) -> None:
        parent: dict[str, str] = {}

        def find(x: str) -> str:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(a: str, b: str) -> None:
            parent.setdefault(a, a)
            parent.setdefault(b, b)
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[rb] = ra

        for triple in ontology.triples:
            if triple.predicate == "synonym_of":
                union(triple.subject.lower(), triple.object.lower())
        groups: dict[str, set[str]] = {}
        for term in parent:
            groups.setdefault(find(term), set()).add(term)
        for members in sorted(groups.values(), key=lambda m: min(m)):
            self._allocate(frozenset(members))

    def _allocate(self, members: frozenset[str]) -> int:
        concept = Concept(self._next_id, min(members), members)
        self.concepts[concept.id] = concept
        for member in members:
            self._concept_of[member] = concept.id
        self._next_id += 1
        return concept.id

    def map_to_concepts(self, lemmas: list[str], allocate: bool = False) -> list[int]:
        """Concept ids for the lemmas. Unknown lemmas get fresh singleton
        concepts while indexing; at query time they map to the unknown
        sentinel and contribute nothing."""
        out = []
        for lemma in lemmas:
            lemma = lemma.lower()
            cid = self._concept_of.get(lemma)
            if cid is None:
                cid = self._allocate(frozenset({lemma})) if allocate else UNKNOWN_CONCEPT
            out.append(cid)
        return out

    # -- indexing ----------------------------------------------------------

    @property
    def doc_count(self) -> int:
        return len(self.documents)

    def document_frequency(self, concept_id: int) -> int:
        return len({p.doc_id for p in self._postings.get(concept_id, [])})

    def postings(self, concept_id: int) -> list[Posting]:
        return list(self._postings.get(concept_id, []))

    def index_document(self, doc_id: str, sentences: list[AnalyzedSentence]) -> None:
        if doc_id in self.documents:
            raise DuplicateDocument(doc_id)
        occurrences: list[tuple[int, int, int]] = []  # concept, ordinal, position
        tf: dict[int, int] = {}
        for ordinal, sentence in enumerate(sentences):
            for position, tok in enumerate(sentence.tagged):
                if tok.pos not in CONTENT_TAGS:
                    continue
                cid = self.map_to_concepts([tok.lemma], allocate=True)[0]
                occurrences.append((cid, ordinal, position))
                tf[cid] = tf.get(cid, 0) + 1
        for cid, ordinal, position in occurrences:
            self._postings.setdefault(cid, []).append(
                Posting(doc_id, ordinal, position, tf[cid])
            )
        self.documents[doc_id] = [s.text for s in sentences]

    # -- retrieval -----------------------------------------------------------

    def retrieve(self, concept_query: list[tuple[str, float]], k: int) -> list[tuple[str, float]]:
        """Top-k documents by summed weight * tf * idf over query concepts,
        idf = ln(1 + N/df). Ties break by ascending document id; zero-score
        documents are excluded."""
        if k < 1:
            raise ValueError("k must be >= 1")
        weight_of: dict[int, float] = {}
        for term, weight in concept_query:
            cid = self.map_to_concepts([term])[0]
            if cid == UNKNOWN_CONCEPT:
                continue
            weight_of[cid] = max(weight_of.get(cid, 0.0), weight)
        scores: dict[str, float] = {}
        for cid, weight in weight_of.items():
            df = self.document_frequency(cid)
            if df == 0:
                continue
            idf = math.log(1 + self.doc_count / df)
            seen: set[str] = set()
            for posting in self._postings[cid]:
                if posting.doc_id in seen:
                    continue
                seen.add(posting.doc_id)
                scores[posting.doc_id] = (
                    scores.get(posting.doc_id, 0.0) + weight * posting.term_frequency * idf
                )
        ranked = sorted(
            ((doc, score) for doc, score in scores.items() if score > 0.0),
            key=lambda item: (-item[1], item[0]),
        )
        return ranked[:k]

    # -- persistence -----------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "format": SNAPSHOT_FORMAT,
            "version": SNAPSHOT_VERSION,
            "next_id": self._next_id,
            "concepts": [
                {"id": c.id, "canonical": c.canonical, "members": sorted(c.members)}
                for c in sorted(self.concepts.values(), key=lambda c: c.id)
            ],
            "postings": {
                str(cid): [
                    [p.doc_id, p.sentence_ordinal, p.token_position, p.term_frequency]
                    for p in plist
                ]
                for cid, plist in sorted(self._postings.items())
            },
            "documents": {doc: list(sents) for doc, sents in sorted(self.documents.items())},
        }

    def save(self, path: str | Path) -> None:
        Path(path).write_text(
            json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n",
            encoding="utf-8",
        )

    @classmethod
    def load(cls, path: str | Path) -> "ConceptIndex":
        path = Path(path)
        if not path.exists():
            raise SnapshotError(f"index snapshot not found: {path}")
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise SnapshotError(f"index snapshot {path} is not valid JSON: {exc}") from exc
        if data.get("format") != SNAPSHOT_FORMAT:
            raise SnapshotError(f"not an index snapshot: {path}")
        if data.get("version") != SNAPSHOT_VERSION:
            raise SnapshotError(f"unsupported snapshot version {data.get('version')!r}")
        index = cls()
        index._next_id = data["next_id"]
        for rec in data["concepts"]:
            concept = Concept(rec["id"], rec["canonical"], frozenset(rec["members"]))
            index.concepts[concept.id] = concept
            for member in concept.members:
                index._concept_of[member] = concept.id
        for cid, plist in data["postings"].items():
            index._postings[int(cid)] = [Posting(p[0], p[1], p[2], p[3]) for p in plist]
        index.documents = {doc: list(sents) for doc, sents in data["documents"].items()}
        return index

    def __eq__(self, other) -> bool:
        if not isinstance(other, ConceptIndex):
            return NotImplemented
        return (
            self.concepts == other.concepts
            and self._postings == other._postings
            and self.documents == other.documents
            and self._next_id == other._next_id
        )
