"""In-memory domain ontology: classes, object properties with domain and
range, and instance triples populated incrementally from documents.

Storage is a triple store with hash indexes by subject, predicate and
object. Lookups are case-insensitive so that lowercased question lemmas
reach capitalized class and instance names. No description-logic
reasoning happens here; the store answers neighbor and relation-path
queries and enforces declaration/domain/range checks on assertion.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path

log = logging.getLogger(__name__)

BUILTIN_PREDICATES = frozenset({"instance_of", "synonym_of"})


class SchemaError(ValueError):
    """Malformed ontology file; the message names the offending record."""


class ConstraintError(ValueError):
    """A triple or declaration violates the declared class constraints."""


@dataclass(frozen=True)
class ClassDef:
    name: str
    parent: str | None = None


@dataclass(frozen=True)
class ObjectProperty:
    name: str
    domain: str
    range: str
    max_cardinality: int | None = None


@dataclass(frozen=True)
class Triple:
    subject: str
    predicate: str
    object: str
    provenance: str = "base"

    def key(self) -> tuple[str, str, str]:
        return (self.subject, self.predicate, self.object)


class Ontology:
    def __init__(self):
        self.classes: dict[str, ClassDef] = {}
        self.properties: dict[str, ObjectProperty] = {}
        self._triples: dict[tuple[str, str, str], Triple] = {}
        self._by_subject: dict[str, set[tuple[str, str, str]]] = {}
        self._by_predicate: dict[str, set[tuple[str, str, str]]] = {}
        self._by_object: dict[str, set[tuple[str, str, str]]] = {}

    # -- declarations ----------------------------------------------------

    def add_class(self, cls: ClassDef) -> None:
        if cls.name in self.classes:
            raise SchemaError(f"duplicate class '{cls.name}'")
        if cls.parent is not None and cls.parent not in self.classes:
            raise ConstraintError(f"class '{cls.name}' has unknown parent '{cls.parent}'")
        self.classes[cls.name] = cls
        if self._has_cycle(cls.name):
            del self.classes[cls.name]
            raise ConstraintError(f"class '{cls.name}' introduces a hierarchy cycle")

    def add_property(self, prop: ObjectProperty) -> None:
        if prop.name in self.properties:
            raise SchemaError(f"duplicate property '{prop.name}'")
        for ref in (prop.domain, prop.range):
            if ref not in self.classes:
                raise ConstraintError(f"property '{prop.name}' references unknown class '{ref}'")
        self.properties[prop.name] = prop

    def _has_cycle(self, start: str) -> bool:
        seen = set()
        node: str | None = start
        while node is not None:
            if node in seen:
                return True
            seen.add(node)
            node = self.classes[node].parent if node in self.classes else None
        return False

    def hierarchy_is_acyclic(self) -> bool:
        return not any(self._has_cycle(name) for name in self.classes)

    # -- triples ----------------------------------------------------------

    @property
    def triples(self) -> list[Triple]:
        return list(self._triples.values())

    def triple_count(self) -> int:
        return len(self._triples)

    def has_triple(self, subject: str, predicate: str, object: str) -> bool:
        return (subject, predicate, object) in self._triples

    def assert_triple(self, triple: Triple) -> bool:
        """Add a triple after declaration and domain/range checks.

        Re-asserting an existing (subject, predicate, object) is a no-op
        regardless of provenance. Returns True when the store grew.
        """
        if not triple.subject or not triple.object:
            raise ConstraintError(f"triple with empty term: {triple!r}")
        if triple.predicate in BUILTIN_PREDICATES:
            if triple.predicate == "instance_of" and triple.object not in self.classes:
                raise ConstraintError(
                    f"instance_of object '{triple.object}' is not a declared class"
                )
        elif triple.predicate in self.properties:
            prop = self.properties[triple.predicate]
            self._check_range(triple.subject, prop.domain, triple)
            self._check_range(triple.object, prop.range, triple)
        else:
            raise ConstraintError(f"undeclared predicate '{triple.predicate}'")
        key = triple.key()
        if key in self._triples:
            return False
        self._triples[key] = triple
        self._by_subject.setdefault(triple.subject.lower(), set()).add(key)
        self._by_predicate.setdefault(triple.predicate.lower(), set()).add(key)
        self._by_object.setdefault(triple.object.lower(), set()).add(key)
        return True

    def _check_range(self, term: str, declared: str, triple: Triple) -> None:
        known = self.classes_of(term)
        if not known:
            return
        if not any(self.is_subclass(c, declared) for c in known):
            raise ConstraintError(
                f"'{term}' of class {sorted(known)} is incompatible with "
                f"'{declared}' in {triple.key()}"
            )

    def classes_of(self, term: str) -> set[str]:
        keys = self._by_subject.get(term.lower(), set())
        return {
            self._triples[k].object for k in keys if self._triples[k].predicate == "instance_of"
        }

    def is_subclass(self, name: str, ancestor: str) -> bool:
        node: str | None = name
        while node is not None:
            if node == ancestor:
                return True
            node = self.classes[node].parent if node in self.classes else None
        return False

    # -- population --------------------------------------------------------

    def populate_from_document(self, sentences, frames) -> int:
        """Assert frame-derived property triples and entity instance_of
        triples for one analyzed document. Constraint violations are
        logged and skipped so noisy text cannot abort ingestion. Returns
        the number of triples added."""
        doc_id = sentences[0].sentence_id[0] if sentences else "unknown"
        added = 0
        for sentence, frame in zip(sentences, frames):
            if frame is not None:
                added += self._assert_frame_triple(frame, doc_id)
            added += self._assert_entity_triples(sentence, doc_id)
        return added

    def _assert_frame_triple(self, frame, doc_id: str) -> int:
        prop = frame.ontology_property
        if prop is None:
            return 0
        subject = self._filler_term(frame.bindings.get("AGENT"))
        obj = None
        for role in ("RECIPIENT", "THEME", "LOCATION"):
            obj = self._filler_term(frame.bindings.get(role))
            if obj is not None:
                break
        if subject is None or obj is None:
            return 0
        try:
            return int(self.assert_triple(Triple(subject, prop, obj, provenance=doc_id)))
        except ConstraintError as exc:
            log.warning("skipping frame triple from %s: %s", doc_id, exc)
            return 0

    @staticmethod
    def _filler_term(filler) -> str | None:
        if filler is None or filler.is_wh or not filler.head_lemma:
            return None
        if filler.head_pos == "pronoun":
            return None
        head = filler.text.split()[-1] if filler.text else ""
        if head[:1].isupper():
            return head
        return filler.head_lemma

    def _assert_entity_triples(self, sentence, doc_id: str) -> int:
        added = 0
        spans = entity_spans(sentence)
        for label, text in spans:
            class_name = {"PERSON": "Person", "LOCATION": "Location"}.get(label)
            if class_name is None or class_name not in self.classes:
                continue
            try:
                added += int(self.assert_triple(Triple(text, "instance_of", class_name, provenance=doc_id)))
            except ConstraintError as exc:
                log.warning("skipping entity triple from %s: %s", doc_id, exc)
        return added

    # -- queries ------------------------------------------------------------

    def _touching(self, term: str) -> set[tuple[str, str, str]]:
        low = term.lower()
        return self._by_subject.get(low, set()) | self._by_object.get(low, set())

    def related_concepts(self, term: str) -> set[tuple[str, str]]:
        """Terms one step away: synonyms, direct super/subclasses, and
        anything one triple hop away. The query term itself is excluded."""
        low = term.lower()
        out: set[tuple[str, str]] = set()
        for key in self._touching(term):
            triple = self._triples[key]
            other = triple.object if triple.subject.lower() == low else triple.subject
            if other.lower() != low:
                out.add((other, triple.predicate))
        cls = self._class_named(term)
        if cls is not None:
            if cls.parent is not None:
                out.add((cls.parent, "subclass_of"))
            for child in self.classes.values():
                if child.parent == cls.name:
                    out.add((child.name, "subclass_of"))
        return out

    def _class_named(self, term: str) -> ClassDef | None:
        for cls in self.classes.values():
            if cls.name.lower() == term.lower():
                return cls
        return None

    def identify_relations(self, a: str, b: str) -> list[list[str]]:
        """Property paths of length one or two connecting the two terms,
        shortest first, then lexicographic. Edges are undirected."""
        a_low, b_low = a.lower(), b.lower()
        if a_low == b_low:
            return []
        paths: set[tuple[str, ...]] = set()
        for key in self._touching(a):
            t = self._triples[key]
            other = t.object if t.subject.lower() == a_low else t.subject
            if other.lower() == b_low:
                paths.add((t.predicate,))
        for key1 in self._touching(a):
            t1 = self._triples[key1]
            mid = t1.object if t1.subject.lower() == a_low else t1.subject
            if mid.lower() in (a_low, b_low):
                continue
            for key2 in self._touching(mid):
                t2 = self._triples[key2]
                other = t2.object if t2.subject.lower() == mid.lower() else t2.subject
                if other.lower() == b_low:
                    paths.add((t1.predicate, t2.predicate))
        return [list(p) for p in sorted(paths, key=lambda p: (len(p), p))]

    def instances_of(self, class_name: str) -> list[str]:
        keys = self._by_predicate.get("instance_of", set())
        out = {
            self._triples[k].subject
            for k in keys
            if self.is_subclass(self._triples[k].object, class_name)
        }
        return sorted(out)

    # -- serialization --------------------------------------------------------

    def to_dict(self) -> dict:
        classes = []
        for cls in sorted(self.classes.values(), key=lambda c: c.name):
            rec: dict = {"name": cls.name}
            if cls.parent is not None:
                rec["parent"] = cls.parent
            classes.append(rec)
        properties = []
        for prop in sorted(self.properties.values(), key=lambda p: p.name):
            rec = {"name": prop.name, "domain": prop.domain, "range": prop.range}
            if prop.max_cardinality is not None:
                rec["max_cardinality"] = prop.max_cardinality
            properties.append(rec)
        triples = sorted(
            [t.subject, t.predicate, t.object, t.provenance] for t in self._triples.values()
        )
        return {"classes": classes, "properties": properties, "triples": triples}

    def save(self, path: str | Path) -> None:
        Path(path).write_text(
            json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n",
            encoding="utf-8",
        )

    @classmethod
    def from_dict(cls, data: dict) -> "Ontology":
        onto = cls()
        if not isinstance(data, dict):
            raise SchemaError("ontology file must hold a JSON object")
        declared: list[ClassDef] = []
        for record in data.get("classes", []):
            if not isinstance(record, dict) or "name" not in record:
                raise SchemaError(f"bad class record: {record!r}")
            declared.append(ClassDef(record["name"], record.get("parent")))
        # classes are stored sorted by name, so declare names first and
        # check parents afterwards
        for cls_def in declared:
            if cls_def.name in onto.classes:
                raise SchemaError(f"duplicate class '{cls_def.name}'")
            onto.classes[cls_def.name] = cls_def
        for cls_def in declared:
            if cls_def.parent is not None and cls_def.parent not in onto.classes:
                raise ConstraintError(
                    f"class '{cls_def.name}' has unknown parent '{cls_def.parent}'"
                )
            if onto._has_cycle(cls_def.name):
                raise ConstraintError(f"class '{cls_def.name}' introduces a hierarchy cycle")
        for record in data.get("properties", []):
            if not isinstance(record, dict) or not {"name", "domain", "range"} <= set(record):
                raise SchemaError(f"bad property record: {record!r}")
            onto.add_property(
                ObjectProperty(
                    record["name"], record["domain"], record["range"],
                    record.get("max_cardinality"),
                )
            )
        for record in data.get("triples", []):
            if not isinstance(record, (list, tuple)) or len(record) not in (3, 4):
                raise SchemaError(f"bad triple record: {record!r}")
            prov = record[3] if len(record) == 4 else "base"
            onto.assert_triple(Triple(record[0], record[1], record[2], prov))
        onto._check_cardinality()
        return onto

    def _check_cardinality(self) -> None:
        for prop in self.properties.values():
            if prop.max_cardinality is None:
                continue
            counts: dict[str, int] = {}
            for key in self._by_predicate.get(prop.name.lower(), set()):
                subject = self._triples[key].subject
                counts[subject] = counts.get(subject, 0) + 1
            for subject, count in counts.items():
                if count > prop.max_cardinality:
                    raise ConstraintError(
                        f"'{subject}' has {count} values for '{prop.name}' "
                        f"(max {prop.max_cardinality})"
                    )

    @classmethod
    def load(cls, path: str | Path) -> "Ontology":
        path = Path(path)
        if not path.exists():
            raise SchemaError(f"ontology file not found: {path}")
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise SchemaError(f"ontology file {path} is not valid JSON: {exc}") from exc
        return cls.from_dict(data)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Ontology):
            return NotImplemented
        return (
            self.classes == other.classes
            and self.properties == other.properties
            and self._triples == other._triples
        )

    def stats(self) -> dict[str, int]:
        return {
            "classes": len(self.classes),
            "properties": len(self.properties),
            "triples": len(self._triples),
        }


def entity_spans(sentence) -> list[tuple[str, str]]:
    """(label, text) pairs for maximal same-label entity runs."""
    spans = []
    tagged = sentence.tagged
    i = 0
    while i < len(tagged):
        label = tagged[i].ner
        if label == "NONE":
            i += 1
            continue
        j = i
        while j < len(tagged) and tagged[j].ner == label:
            j += 1
        text = sentence.text[tagged[i].token.start:tagged[j - 1].token.end]
        spans.append((label, text))
        i = j
    return spans
