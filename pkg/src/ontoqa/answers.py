"""Candidate sentence extraction, focus filtering, frame-similarity
ranking and short answer generation."""

from __future__ import annotations

from dataclasses import dataclass

from .analysis import AnalyzedSentence
from .frames import SemanticFrame, frame_similarity, SIMILARITY_WEIGHTS
from .ontology import Ontology, entity_spans
from .question import QuestionAnalysis, detect_phrases

# A candidate without a comparable frame can never outscore a perfect
# frame match: its chunk-overlap score is capped at this factor.
FRAMELESS_CAP = 0.5

DETERMINERS = frozenset({"a", "an", "the", "this", "that", "these", "those"})

# Focus -> acceptable entity labels. DATE and DURATION answers are
# interchangeable at answer time, as are NUMBER and METRICS.
_FOCUS_ENTITIES = {
    "PERSON": {"PERSON"},
    "LOCATION": {"LOCATION"},
    "DATE": {"DATE", "DURATION"},
    "DURATION": {"DATE", "DURATION"},
    "NUMBER": {"NUMBER", "METRICS"},
    "METRICS": {"NUMBER", "METRICS"},
}

# Focus -> frame roles whose filler counts as focus-compatible.
_FOCUS_ROLES = {
    "PERSON": {"AGENT", "RECIPIENT"},
    "LOCATION": {"LOCATION"},
}


@dataclass
class DocSentence:
    """One analyzed corpus sentence with its frame, when one exists."""

    analyzed: AnalyzedSentence
    frame: SemanticFrame | None


@dataclass
class CandidateAnswer:
    doc_id: str
    sentence_ordinal: int
    sentence_text: str
    frame: SemanticFrame | None
    chunk_matches: int
    analyzed: AnalyzedSentence | None = None
    score: float = 0.0
    precise_answer: str | None = None
    ontology_derived: bool = False


@dataclass
class AnswerSet:
    answers: list[CandidateAnswer]
    question: QuestionAnalysis


def _phrase_heads(question: QuestionAnalysis) -> list[str]:
    heads = []
    for ch in detect_phrases(question.analyzed):
        head = question.analyzed.head_token(ch)
        if head is not None and head.lemma not in heads:
            heads.append(head.lemma)
    return heads


def _sentence_heads(analyzed: AnalyzedSentence) -> set[str]:
    heads = set()
    for ch in analyzed.chunks:
        if ch.label == "VP":
            continue
        head = analyzed.head_token(ch)
        if head is not None:
            heads.add(head.lemma)
    return heads


def extract_candidates(
    question: QuestionAnalysis,
    ranked_docs: list[tuple[str, float]],
    corpus: dict[str, list[DocSentence]],
) -> list[CandidateAnswer]:
    """A sentence of a retrieved document becomes a candidate when it
    shares an NP head lemma with the question phrases, or when its frame
    overlaps the question frame in at least one predicate signature."""
    q_heads = _phrase_heads(question)
    q_sigs = (
        {p.signature() for p in question.frame.predicates} if question.frame else set()
    )
    candidates = []
    for doc_id, _score in ranked_docs:
        for ordinal, doc_sentence in enumerate(corpus.get(doc_id, [])):
            analyzed = doc_sentence.analyzed
            heads = _sentence_heads(analyzed)
            matches = sum(1 for h in q_heads if h in heads)
            frame_overlap = False
            if q_sigs and doc_sentence.frame is not None:
                a_sigs = {p.signature() for p in doc_sentence.frame.predicates}
                frame_overlap = bool(q_sigs & a_sigs)
            if matches == 0 and not frame_overlap:
                continue
            candidates.append(
                CandidateAnswer(
                    doc_id=doc_id,
                    sentence_ordinal=ordinal,
                    sentence_text=analyzed.text,
                    frame=doc_sentence.frame,
                    chunk_matches=matches,
                    analyzed=analyzed,
                )
            )
    return candidates


def _has_focus_entity(analyzed: AnalyzedSentence | None, focus: str) -> bool:
    if analyzed is None:
        return False
    accepted = _FOCUS_ENTITIES.get(focus, set())
    return any(label in accepted for label, _text in entity_spans(analyzed))


def _has_focus_role(frame: SemanticFrame | None, focus: str) -> bool:
    if frame is None:
        return False
    roles = _FOCUS_ROLES.get(focus, set())
    return any(role in frame.bindings and not frame.bindings[role].is_wh for role in roles)


def filter_candidates(candidates: list[CandidateAnswer], focus: str) -> list[CandidateAnswer]:
    """Keep candidates holding an entity or role filler compatible with
    the question focus. DEGREE and UNKNOWN apply no filtering."""
    if focus in ("DEGREE", "UNKNOWN"):
        return list(candidates)
    return [
        c for c in candidates
        if _has_focus_entity(c.analyzed, focus) or _has_focus_role(c.frame, focus)
    ]


def rank_answers(
    candidates: list[CandidateAnswer],
    question: QuestionAnalysis,
    weights: tuple[float, float, float] = SIMILARITY_WEIGHTS,
) -> AnswerSet:
    """Score by question/answer frame similarity; sentences without a
    comparable frame fall back to scaled chunk overlap."""
    total_phrases = len(detect_phrases(question.analyzed))
    scored = []
    for cand in candidates:
        if question.frame is not None and cand.frame is not None:
            score = frame_similarity(question.frame, cand.frame, weights)
        elif total_phrases > 0:
            score = FRAMELESS_CAP * cand.chunk_matches / total_phrases
        else:
            score = 0.0
        scored.append(
            CandidateAnswer(
                doc_id=cand.doc_id,
                sentence_ordinal=cand.sentence_ordinal,
                sentence_text=cand.sentence_text,
                frame=cand.frame,
                chunk_matches=cand.chunk_matches,
                analyzed=cand.analyzed,
                score=score,
                ontology_derived=cand.ontology_derived,
            )
        )
    scored.sort(key=lambda c: (-c.score, c.doc_id, c.sentence_ordinal))
    return AnswerSet(scored, question)


def strip_determiner(text: str) -> str:
    words = text.split()
    while words and words[0].lower() in DETERMINERS:
        words = words[1:]
    stripped = " ".join(words)
    return stripped if stripped else text


def generate_answer(candidate: CandidateAnswer, question: QuestionAnalysis) -> str | None:
    """Short answer for one candidate: the filler of the role the question
    asks about, else the first focus-compatible entity span, else nothing
    (sentence-level answer only). Leading determiners are dropped."""
    wh_role = question.frame.wh_role() if question.frame is not None else None
    if wh_role is not None and candidate.frame is not None:
        filler = candidate.frame.bindings.get(wh_role)
        if filler is not None and not filler.is_wh:
            return strip_determiner(filler.text)
    if candidate.analyzed is not None:
        accepted = _FOCUS_ENTITIES.get(question.focus, set())
        for label, text in entity_spans(candidate.analyzed):
            if label in accepted:
                return strip_determiner(text)
    return None


def _directed(ontology: Ontology, subject: str, predicate: str, obj: str) -> bool:
    return any(
        t.subject.lower() == subject.lower()
        and t.predicate == predicate
        and t.object.lower() == obj.lower()
        for t in ontology.triples
    )


def relation_fallback(question: QuestionAnalysis, ontology: Ontology) -> CandidateAnswer | None:
    """Last resort when filtering leaves no candidate: look for a short
    property path between a question phrase head and a focus-compatible
    instance, and synthesize a subject-property-object statement from it.
    The result is flagged as derived from the ontology, not the corpus."""
    class_name = {"PERSON": "Person", "LOCATION": "Location"}.get(question.focus)
    if class_name is None:
        return None
    best: tuple[int, str, str, list[str]] | None = None
    for term in _phrase_heads(question):
        for instance in ontology.instances_of(class_name):
            if instance.lower() == term.lower():
                continue
            for path in ontology.identify_relations(term, instance):
                key = (len(path), term, instance, path)
                if best is None or key < best:
                    best = key
    if best is None:
        return None
    _length, term, instance, path = best
    if len(path) == 1 and _directed(ontology, term, path[0], instance):
        text = f"{term} {path[0]} {instance}."
    elif len(path) == 1:
        text = f"{instance} {path[0]} {term}."
    else:
        text = f"{instance} {' and '.join(path)} {term}."
    return CandidateAnswer(
        doc_id="ontology",
        sentence_ordinal=0,
        sentence_text=text,
        frame=None,
        chunk_matches=0,
        score=0.0,
        precise_answer=instance,
        ontology_derived=True,
    )
