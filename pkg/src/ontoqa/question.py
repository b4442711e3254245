"""Question analysis: focus classification, phrase and frame detection,
and ontology/morphology driven query reformulation."""

from __future__ import annotations

from dataclasses import dataclass

from .analysis import Analyzer, AnalyzedSentence, Chunk, CONTENT_TAGS
from .frames import NoVerbEntry, SemanticFrame, VerbLexicon, instantiate_frame, label_roles
from .ontology import Ontology

FOCUS_VALUES = (
    "PERSON", "LOCATION", "DATE", "DURATION", "NUMBER", "METRICS", "DEGREE", "UNKNOWN",
)

EXPANSION_WEIGHTS = (1.0, 0.5)  # original term, expansion

# Two-word question expressions, checked before the single question word.
_PAIR_FOCUS = {
    ("how", "far"): "NUMBER",
    ("how", "many"): "NUMBER",
    ("how", "long"): "DURATION",
    ("how", "much"): "METRICS",
    ("what", "time"): "DATE",
}

_SINGLE_FOCUS = {
    "who": "PERSON",
    "whom": "PERSON",
    "whose": "PERSON",
    "where": "LOCATION",
    "when": "DATE",  # duration answers are also accepted at answer time
}


@dataclass
class QuestionAnalysis:
    text: str
    focus: str
    analyzed: AnalyzedSentence
    frame: SemanticFrame | None
    concept_query: list[tuple[str, float]]

    def phrases(self) -> list[Chunk]:
        return detect_phrases(self.analyzed)


def classify_focus(analyzed: AnalyzedSentence) -> str:
    """Longest match over the leading question expression.

    Two-word forms (how many, what time, ...) win over the bare question
    word; "how" followed by any other adjective or adverb asks about a
    degree. Questions without a leading question word return UNKNOWN.
    """
    words = [t for t in analyzed.tagged if t.pos != "punctuation"]
    if not words:
        return "UNKNOWN"
    first = words[0].surface.lower()
    second = words[1] if len(words) > 1 else None
    if second is not None:
        pair = _PAIR_FOCUS.get((first, second.surface.lower()))
        if pair:
            return pair
        if first == "how" and second.pos in {"adjective", "adverb"}:
            return "DEGREE"
    return _SINGLE_FOCUS.get(first, "UNKNOWN")


def detect_phrases(analyzed: AnalyzedSentence) -> list[Chunk]:
    """NP and PP chunks that must be matched in the documents. Bare
    question-word chunks carry no content and are excluded."""
    out = []
    for ch in analyzed.chunks:
        if ch.label == "VP":
            continue
        toks = analyzed.chunk_tokens(analyzed.np_core(ch))
        if all(t.pos == "wh-word" for t in toks):
            continue
        out.append(ch)
    return out


def detect_frame(analyzed: AnalyzedSentence, verbs: VerbLexicon, event_id: str = "E") -> SemanticFrame | None:
    try:
        lemma, roles = label_roles(analyzed, verbs)
    except NoVerbEntry:
        return None
    return instantiate_frame(roles, lemma, verbs, event_id=event_id)


def content_lemmas(analyzed: AnalyzedSentence) -> list[str]:
    """Distinct content-word lemmas in question order."""
    seen: list[str] = []
    for t in analyzed.tagged:
        if t.pos in CONTENT_TAGS and t.lemma not in seen:
            seen.append(t.lemma)
    return seen


def reformulate_query(
    analyzed: AnalyzedSentence,
    focus: str,
    ontology: Ontology,
    analyzer: Analyzer,
    weights: tuple[float, float] = EXPANSION_WEIGHTS,
) -> list[tuple[str, float]]:
    """Build the weighted concept query for retrieval.

    Original content lemmas keep full weight; morphological variants and
    one-hop ontology neighbors (synonyms, direct super/subclasses,
    object-property neighbors) join at the expansion weight.
    """
    original_w, expansion_w = weights
    terms = content_lemmas(analyzed)
    query: dict[str, float] = {}
    for term in terms:
        query[term] = original_w
    for term in terms:
        expansions: set[str] = set(analyzer.lexicon.morphological_variants(term))
        for neighbor, _relation in ontology.related_concepts(term):
            expansions.add(neighbor.lower())
        for exp in sorted(expansions):
            if exp not in query:
                query[exp] = expansion_w
    ordered = [(t, query[t]) for t in terms]
    ordered.extend(
        (t, w) for t, w in sorted(query.items()) if t not in terms
    )
    return ordered


def analyze_question(
    text: str,
    analyzer: Analyzer,
    verbs: VerbLexicon,
    ontology: Ontology,
    expansion_weights: tuple[float, float] = EXPANSION_WEIGHTS,
) -> QuestionAnalysis:
    analyzed = analyzer.analyze_sentence(text.strip(), ("question", 0))
    focus = classify_focus(analyzed)
    frame = detect_frame(analyzed, verbs, event_id="Q")
    query = reformulate_query(analyzed, focus, ontology, analyzer, expansion_weights)
    return QuestionAnalysis(text.strip(), focus, analyzed, frame, query)
