"""Rule and lexicon based text analysis.

Sentence splitting, tokenization, part-of-speech tagging, named entity
tagging and regular-expression chunking, shared by question and document
processing. All behaviour is driven by a single JSON lexicon file; the
analyzers are pure functions of their inputs plus the loaded lexicon, so
one Analyzer instance is safe to share across threads. Analyzer is also
the seam where an external tagger could be substituted.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, replace
from pathlib import Path

POS_TAGS = frozenset({
    "noun", "proper-noun", "verb", "adjective", "adverb", "determiner",
    "preposition", "pronoun", "wh-word", "number", "punctuation", "other",
})

NER_LABELS = frozenset({
    "PERSON", "LOCATION", "DATE", "DURATION", "NUMBER", "METRICS", "NONE",
})

# Tags that can head an NP. Interrogative pronouns count as pronouns for
# chunking purposes; that is what lets a leading "Who" form its own NP.
NP_HEAD_TAGS = frozenset({"noun", "proper-noun", "pronoun", "wh-word"})
NP_MOD_TAGS = frozenset({"adjective", "number"})

# Content words for indexing and query building; everything else is a
# closed-class stop tag.
CONTENT_TAGS = frozenset({
    "noun", "proper-noun", "verb", "adjective", "adverb", "number",
})

# Auxiliary lemmas never head a verb frame and trigger the -ed/-ing verb
# heuristic on the following token.
AUXILIARY_LEMMAS = frozenset({
    "be", "do", "have", "will", "would", "can", "could", "shall", "should",
    "may", "might", "must",
})

PUNCT_CHARS = set(".,!?;:\"'()[]{}")
TERMINALS = ".!?"

_NUMERIC_RE = re.compile(r"^\d+(?:[.,]\d+)*$")


class LexiconError(ValueError):
    """Raised when the lexicon file is missing, malformed or inconsistent."""


@dataclass(frozen=True)
class Token:
    surface: str
    lemma: str
    start: int
    end: int


@dataclass(frozen=True)
class TaggedToken:
    token: Token
    pos: str
    ner: str = "NONE"

    @property
    def surface(self) -> str:
        return self.token.surface

    @property
    def lemma(self) -> str:
        return self.token.lemma


@dataclass(frozen=True)
class Chunk:
    """A non-recursive phrase over token indexes [start, end)."""

    label: str  # NP | VP | PP
    start: int
    end: int


@dataclass(frozen=True)
class SentenceSpan:
    text: str
    start: int
    end: int


@dataclass(frozen=True)
class AnalyzedSentence:
    sentence_id: tuple[str, int]
    text: str
    tagged: tuple[TaggedToken, ...]
    chunks: tuple[Chunk, ...]

    def chunk_text(self, chunk: Chunk) -> str:
        toks = self.tagged[chunk.start:chunk.end]
        return self.text[toks[0].token.start:toks[-1].token.end]

    def chunk_tokens(self, chunk: Chunk) -> tuple[TaggedToken, ...]:
        return self.tagged[chunk.start:chunk.end]

    def np_core(self, chunk: Chunk) -> Chunk:
        """The NP part of a PP chunk (the chunk itself for NP/VP)."""
        if chunk.label != "PP":
            return chunk
        return Chunk("NP", chunk.start + 1, chunk.end)

    def head_token(self, chunk: Chunk) -> TaggedToken | None:
        """Last head-class token of a chunk: the noun of an NP or the verb
        of a VP. For a PP the head of the embedded NP is returned."""
        if chunk.label == "VP":
            heads = [t for t in self.chunk_tokens(chunk) if t.pos == "verb"]
        else:
            core = self.np_core(chunk)
            heads = [t for t in self.chunk_tokens(core) if t.pos in NP_HEAD_TAGS]
        return heads[-1] if heads else None


def _undouble(stem: str) -> str:
    if len(stem) >= 2 and stem[-1] == stem[-2] and stem[-1].isalpha():
        return stem[:-1]
    return stem


class Lexicon:
    """Immutable word lists backing all analyzers.

    Sections: closed_class, open_class, irregular_verbs, gazetteers
    (person, location), date_patterns, units, abbreviations.
    """

    REQUIRED_SECTIONS = (
        "closed_class", "open_class", "irregular_verbs", "gazetteers",
        "date_patterns", "units", "abbreviations",
    )

    def __init__(self, data: dict):
        for section in self.REQUIRED_SECTIONS:
            if section not in data:
                raise LexiconError(f"lexicon missing section '{section}'")
        self.closed_class: dict[str, str] = dict(data["closed_class"])
        self.open_class: dict[str, str] = dict(data["open_class"])
        self.irregular_verbs: dict[str, str] = dict(data["irregular_verbs"])
        for word, tag in list(self.closed_class.items()) + list(self.open_class.items()):
            if tag not in POS_TAGS:
                raise LexiconError(f"unknown POS tag '{tag}' for word '{word}'")
        gaz = data["gazetteers"]
        self.person_gazetteer = frozenset(w.lower() for w in gaz.get("person", []))
        self.location_gazetteer = frozenset(w.lower() for w in gaz.get("location", []))
        patterns = data["date_patterns"]
        self.date_words = frozenset(
            w.lower()
            for key in ("weekdays", "months", "relative")
            for w in patterns.get(key, [])
        )
        self.duration_units = frozenset(w.lower() for w in patterns.get("duration_units", []))
        self.units = frozenset(w.lower() for w in data["units"])
        self.abbreviations = frozenset(data["abbreviations"])
        self.titles = frozenset(a for a in self.abbreviations if a not in {"St."})
        self._known_lemmas = (
            frozenset(self.open_class)
            | frozenset(self.closed_class)
            | frozenset(self.irregular_verbs.values())
        )

    @classmethod
    def load(cls, path: str | Path) -> "Lexicon":
        path = Path(path)
        if not path.exists():
            raise LexiconError(f"lexicon file not found: {path}")
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise LexiconError(f"lexicon file {path} is not valid JSON: {exc}") from exc
        return cls(data)

    def lemmatize(self, surface: str) -> str:
        w = surface.lower()
        if not any(c.isalpha() for c in w):
            return w
        if w.endswith("'s"):
            w = w[:-2]
        if w in self.irregular_verbs:
            return self.irregular_verbs[w]
        if w in self.closed_class or w in self.open_class:
            return w
        if w.endswith("ies") and len(w) > 4:
            return w[:-3] + "y"
        if len(w) > 4 and w.endswith("es") and w[:-2].endswith(("ss", "sh", "ch", "x", "z", "o")):
            return w[:-2]
        if w.endswith("ing") and len(w) > 5:
            stem = w[:-3]
            return self._best_stem([stem, stem + "e", _undouble(stem)])
        if w.endswith("ed") and len(w) > 4:
            stem = w[:-2]
            return self._best_stem([stem, w[:-1], _undouble(stem)])
        if w.endswith("s") and not w.endswith("ss") and len(w) > 3:
            return w[:-1]
        return w

    def _best_stem(self, candidates: list[str]) -> str:
        for cand in candidates:
            if cand in self._known_lemmas:
                return cand
        return candidates[0]

    def morphological_variants(self, lemma: str) -> set[str]:
        """Surface forms that lemmatize back to this lemma: the inverse of
        lemmatize, restricted to regular plural / verbal morphology plus the
        irregular verb table."""
        variants: set[str] = set()
        tag = self.open_class.get(lemma)
        if tag == "noun" or tag is None:
            if lemma.endswith("y") and len(lemma) > 2:
                variants.add(lemma[:-1] + "ies")
            elif lemma.endswith(("s", "sh", "ch", "x", "z", "o")):
                variants.add(lemma + "es")
            else:
                variants.add(lemma + "s")
        if tag == "verb":
            variants.add(lemma + "s" if not lemma.endswith(("s", "sh", "ch", "x", "z", "o")) else lemma + "es")
            irregular_forms = {f for f, base in self.irregular_verbs.items() if base == lemma}
            if lemma.endswith("e"):
                variants.add(lemma[:-1] + "ing")
                if not irregular_forms:
                    variants.add(lemma + "d")
            else:
                variants.add(lemma + "ing")
                if not irregular_forms:
                    variants.add(lemma + "ed")
            variants |= irregular_forms
        variants.discard(lemma)
        return {v for v in variants if self.lemmatize(v) == lemma}


class Analyzer:
    """Rule/lexicon analyzer pipeline. Any object with the same method
    surface (split_sentences, tokenize, pos_tag, ner_tag, analyze) can be
    used in its place."""

    def __init__(self, lexicon: Lexicon):
        self.lexicon = lexicon

    # -- sentence splitting --------------------------------------------

    def split_sentences(self, text: str) -> list[SentenceSpan]:
        """Split on terminal punctuation followed by whitespace and a
        capital, honoring the closed abbreviation list."""
        spans: list[SentenceSpan] = []
        if not text:
            return spans
        boundaries = [0]
        i = 0
        n = len(text)
        while i < n:
            ch = text[i]
            if ch in TERMINALS:
                j = i
                while j + 1 < n and text[j + 1] in TERMINALS:
                    j += 1
                k = j + 1
                while k < n and text[k].isspace():
                    k += 1
                if k < n and k > j + 1 and (text[k].isupper() or text[k].isdigit() or text[k] in "\"'"):
                    if ch == "." and self._ends_with_abbreviation(text, i):
                        i += 1
                        continue
                    boundaries.append(k)
                    i = k
                    continue
            i += 1
        boundaries.append(n)
        for a, b in zip(boundaries, boundaries[1:]):
            raw = text[a:b]
            stripped = raw.strip()
            if not stripped:
                continue
            start = a + raw.index(stripped[0])
            spans.append(SentenceSpan(stripped, start, start + len(stripped)))
        return spans

    def _ends_with_abbreviation(self, text: str, period_index: int) -> bool:
        j = period_index
        while j > 0 and not text[j - 1].isspace():
            j -= 1
        word = text[j:period_index + 1]
        return word in self.lexicon.abbreviations

    # -- tokenization --------------------------------------------------

    def tokenize(self, sentence: str) -> list[Token]:
        """Whitespace tokenization with punctuation detached into its own
        tokens. Abbreviation periods stay attached ("Mr." is one token)."""
        tokens: list[Token] = []
        for match in re.finditer(r"\S+", sentence):
            start, end = match.start(), match.end()
            # leading punctuation
            while start < end and sentence[start] in PUNCT_CHARS:
                tokens.append(self._make_token(sentence, start, start + 1))
                start += 1
            # trailing punctuation, protecting abbreviation periods
            trailing: list[tuple[int, int]] = []
            while end > start and sentence[end - 1] in PUNCT_CHARS:
                if sentence[end - 1] == "." and sentence[start:end] in self.lexicon.abbreviations:
                    break
                trailing.append((end - 1, end))
                end -= 1
            if end > start:
                tokens.append(self._make_token(sentence, start, end))
            tokens.extend(self._make_token(sentence, a, b) for a, b in reversed(trailing))
        return tokens

    def _make_token(self, source: str, start: int, end: int) -> Token:
        surface = source[start:end]
        return Token(surface, self.lexicon.lemmatize(surface), start, end)

    # -- part of speech ------------------------------------------------

    def pos_tag(self, tokens: list[Token]) -> list[TaggedToken]:
        tagged: list[TaggedToken] = []
        for i, tok in enumerate(tokens):
            prev = tokens[i - 1] if i > 0 else None
            tagged.append(TaggedToken(tok, self._pos_for(tok, i, prev)))
        return tagged

    def _pos_for(self, tok: Token, index: int, prev: Token | None) -> str:
        surface, lemma = tok.surface, tok.lemma
        lower = surface.lower()
        lex = self.lexicon
        if all(c in PUNCT_CHARS for c in surface):
            return "punctuation"
        if _NUMERIC_RE.match(surface):
            return "number"
        if lower in lex.closed_class:
            return lex.closed_class[lower]
        if lemma in lex.open_class:
            return lex.open_class[lemma]
        if lower in lex.open_class:
            return lex.open_class[lower]
        if index > 0 and surface[0].isupper():
            return "proper-noun"
        if surface[0].isupper() and (lower in lex.person_gazetteer or lower in lex.location_gazetteer):
            return "proper-noun"
        if lower.endswith("ly") and len(lower) > 3:
            return "adverb"
        if lower.endswith(("ed", "ing")) and prev is not None and prev.lemma in AUXILIARY_LEMMAS:
            return "verb"
        return "noun"

    # -- named entities ------------------------------------------------

    def ner_tag(self, tagged: list[TaggedToken]) -> list[TaggedToken]:
        """Assign entity labels from gazetteers and word/number patterns.
        Labels are recomputed from scratch, so the operation is idempotent."""
        lex = self.lexicon
        n = len(tagged)
        labels: list[str | None] = [None] * n

        def claim(i: int, j: int, label: str) -> None:
            if all(labels[k] is None for k in range(i, j)):
                for k in range(i, j):
                    labels[k] = label

        lowers = [t.surface.lower() for t in tagged]

        # dates by word; a number next to a month joins the span
        for i, t in enumerate(tagged):
            if lowers[i] in lex.date_words:
                claim(i, i + 1, "DATE")
                if i + 1 < n and tagged[i + 1].pos == "number" and labels[i + 1] is None:
                    claim(i + 1, i + 2, "DATE")

        # number + unit pairs: durations first, then metric units
        for i in range(n - 1):
            if tagged[i].pos == "number" and labels[i] is None:
                nxt = lowers[i + 1]
                if nxt in lex.duration_units:
                    claim(i, i + 2, "DURATION")
                elif nxt in lex.units:
                    claim(i, i + 2, "METRICS")

        # title + capitalized run is a person regardless of POS
        for i, t in enumerate(tagged[:-1]):
            if t.surface in lex.titles and tagged[i + 1].surface[:1].isupper():
                j = i + 1
                while j < n and tagged[j].surface[:1].isupper() and labels[j] is None:
                    j += 1
                claim(i, j, "PERSON")

        # person and location spans over proper-noun runs
        i = 0
        while i < n:
            if tagged[i].pos != "proper-noun" or labels[i] is not None:
                i += 1
                continue
            j = i
            while j < n and tagged[j].pos == "proper-noun" and labels[j] is None:
                j += 1
            run = lowers[i:j]
            if all(w in lex.person_gazetteer for w in run):
                claim(i, j, "PERSON")
            elif all(w in lex.location_gazetteer for w in run):
                claim(i, j, "LOCATION")
            elif i > 0 and lowers[i - 1] in {"in", "at", "near", "into", "inside"}:
                claim(i, j, "LOCATION")
            i = j

        # remaining bare numbers
        for i, t in enumerate(tagged):
            if labels[i] is None and t.pos == "number":
                labels[i] = "NUMBER"

        return [replace(t, ner=label or "NONE") for t, label in zip(tagged, labels)]

    # -- full pipeline -------------------------------------------------

    def analyze(self, text: str, doc_id: str = "text") -> list[AnalyzedSentence]:
        out = []
        for ordinal, span in enumerate(self.split_sentences(text)):
            out.append(self.analyze_sentence(span.text, (doc_id, ordinal)))
        return out

    def analyze_sentence(self, sentence: str, sentence_id: tuple[str, int]) -> AnalyzedSentence:
        tagged = self.ner_tag(self.pos_tag(self.tokenize(sentence)))
        return AnalyzedSentence(sentence_id, sentence, tuple(tagged), tuple(chunk(tagged)))


def chunk(tagged: list[TaggedToken] | tuple[TaggedToken, ...]) -> list[Chunk]:
    """Longest-match left-to-right chunking.

    NP := (determiner)? (adjective|number)* (noun|proper-noun|pronoun|wh-word)+
    VP := (adverb)* verb+
    PP := preposition NP

    The rules' start sets are disjoint, so a single left-to-right scan with
    greedy matching yields non-overlapping chunks.
    """
    chunks: list[Chunk] = []
    n = len(tagged)
    i = 0
    while i < n:
        pos = tagged[i].pos
        if pos == "preposition":
            j = _match_np(tagged, i + 1)
            if j > i + 1:
                chunks.append(Chunk("PP", i, j))
                i = j
                continue
            i += 1
            continue
        j = _match_np(tagged, i)
        if j > i:
            chunks.append(Chunk("NP", i, j))
            i = j
            continue
        j = _match_vp(tagged, i)
        if j > i:
            chunks.append(Chunk("VP", i, j))
            i = j
            continue
        i += 1
    return chunks


def _match_np(tagged, i: int) -> int:
    n = len(tagged)
    j = i
    if j < n and tagged[j].pos == "determiner":
        j += 1
    while j < n and tagged[j].pos in NP_MOD_TAGS:
        j += 1
    k = j
    while k < n and tagged[k].pos in NP_HEAD_TAGS:
        k += 1
    return k if k > j else i


def _match_vp(tagged, i: int) -> int:
    n = len(tagged)
    j = i
    while j < n and tagged[j].pos == "adverb":
        j += 1
    k = j
    while k < n and tagged[k].pos == "verb":
        k += 1
    return k if k > j else i
