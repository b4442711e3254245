"""Semantic role labeling and frame matching.

A small verb lexicon maps syntactic slots (subject NP, object NP, PP by
preposition) to semantic roles and supplies time-anchored predicate
templates per verb. Role assignment is positional over the chunked
sentence, with a rewrite step that moves a fronted interrogative NP into
the slot its question word stands for (whom asks for the object, where
for a location, and so on).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .analysis import AUXILIARY_LEMMAS, AnalyzedSentence, Chunk

ROLES = ("AGENT", "THEME", "RECIPIENT", "LOCATION", "TIME", "UNKNOWN")
TIME_ANCHORS = ("start", "end", "during")

# Placeholder filler for the role a question asks about. It matches any
# filler during frame comparison.
WH = "WH"

SIMILARITY_WEIGHTS = (0.5, 0.3, 0.2)  # predicates, roles, verb


class VerbLexiconError(ValueError):
    """Raised when the verb lexicon file fails validation."""


class NoVerbEntry(LookupError):
    """No VP head of the sentence is covered by the verb lexicon."""


@dataclass(frozen=True)
class FramePredicate:
    name: str
    time_anchor: str  # start | end | during
    args: tuple[str, ...]  # role names

    def signature(self) -> tuple:
        return (self.name, self.time_anchor, self.args)

    def render(self) -> str:
        inner = ", ".join(role.capitalize() for role in self.args)
        return f"{self.name}({self.time_anchor}(E), {inner})"


@dataclass(frozen=True)
class PPSlot:
    prepositions: frozenset[str]
    role: str


@dataclass(frozen=True)
class VerbEntry:
    lemma: str
    subject_role: str
    object_role: str | None
    pp_slots: tuple[PPSlot, ...]
    template: tuple[FramePredicate, ...]
    ontology_property: str | None = None

    def roles(self) -> list[str]:
        out = [self.subject_role]
        if self.object_role:
            out.append(self.object_role)
        out.extend(slot.role for slot in self.pp_slots)
        return out


@dataclass(frozen=True)
class Filler:
    """A role filler extracted from a chunk: its text (without the
    preposition for PP chunks), the head noun lemma, and whether the chunk
    was a bare question word."""

    text: str
    head_lemma: str
    is_wh: bool = False
    head_pos: str = "noun"


@dataclass
class SemanticFrame:
    event_id: str
    verb_lemma: str
    bindings: dict[str, Filler]  # role -> filler; WH filler for the asked role
    predicates: tuple[FramePredicate, ...]
    ontology_property: str | None = None

    def wh_role(self) -> str | None:
        for role, filler in self.bindings.items():
            if filler.is_wh:
                return role
        return None

    def render_predicates(self) -> list[str]:
        return [p.render() for p in self.predicates]


class VerbLexicon:
    """Validated collection of VerbEntry records keyed by lemma."""

    def __init__(self, entries: list[VerbEntry]):
        self.entries = {e.lemma: e for e in entries}

    def __contains__(self, lemma: str) -> bool:
        return lemma in self.entries

    def __getitem__(self, lemma: str) -> VerbEntry:
        return self.entries[lemma]

    def get(self, lemma: str) -> VerbEntry | None:
        return self.entries.get(lemma)

    @classmethod
    def load(cls, path: str | Path) -> "VerbLexicon":
        path = Path(path)
        if not path.exists():
            raise VerbLexiconError(f"verb lexicon file not found: {path}")
        try:
            raw = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise VerbLexiconError(f"verb lexicon {path} is not valid JSON: {exc}") from exc
        if not isinstance(raw, list):
            raise VerbLexiconError("verb lexicon must be a JSON list of entries")
        return cls([parse_verb_entry(record) for record in raw])


def parse_verb_entry(record: dict) -> VerbEntry:
    lemma = record.get("lemma")
    if not lemma:
        raise VerbLexiconError(f"verb entry without lemma: {record!r}")

    def fail(msg: str) -> VerbLexiconError:
        return VerbLexiconError(f"verb '{lemma}': {msg}")

    pattern = record.get("pattern")
    if not isinstance(pattern, dict) or "subject" not in pattern:
        raise fail("pattern with a subject role is required")
    subject = pattern["subject"]
    obj = pattern.get("object")
    pp_slots = []
    for slot in pattern.get("pp", []):
        preps = slot.get("prepositions")
        role = slot.get("role")
        if not preps or role not in ROLES:
            raise fail(f"bad pp slot {slot!r}")
        pp_slots.append(PPSlot(frozenset(p.lower() for p in preps), role))
    roles = [subject] + ([obj] if obj else []) + [s.role for s in pp_slots]
    for role in roles:
        if role not in ROLES:
            raise fail(f"unknown role '{role}'")
    if len(set(roles)) != len(roles):
        raise fail("a role may fill at most one slot")
    seen_preps: set[str] = set()
    for slot in pp_slots:
        if slot.prepositions & seen_preps:
            raise fail("a preposition may select at most one slot")
        seen_preps |= slot.prepositions
    template = []
    for pred in record.get("predicates", []):
        name = pred.get("name")
        anchor = pred.get("time")
        args = tuple(pred.get("args", []))
        if not name or anchor not in TIME_ANCHORS:
            raise fail(f"bad predicate {pred!r}")
        for arg in args:
            if arg not in roles:
                raise fail(f"predicate '{name}' references unbound role '{arg}'")
        template.append(FramePredicate(name, anchor, args))
    return VerbEntry(
        lemma=lemma,
        subject_role=subject,
        object_role=obj,
        pp_slots=tuple(pp_slots),
        template=tuple(template),
        ontology_property=record.get("ontology_property"),
    )


# -- role labeling ------------------------------------------------------


def _is_bare_wh(sentence: AnalyzedSentence, chunk: Chunk) -> bool:
    toks = sentence.chunk_tokens(chunk)
    return all(t.pos == "wh-word" for t in toks)


def _filler(sentence: AnalyzedSentence, chunk: Chunk) -> Filler:
    core = sentence.np_core(chunk)
    head = sentence.head_token(chunk)
    head_lemma = head.lemma if head is not None else ""
    head_pos = head.pos if head is not None else "noun"
    return Filler(sentence.chunk_text(core), head_lemma, _is_bare_wh(sentence, core), head_pos)


def _main_verb(sentence: AnalyzedSentence, lexicon: VerbLexicon) -> tuple[Chunk, VerbEntry] | None:
    for ch in sentence.chunks:
        if ch.label != "VP":
            continue
        head = sentence.head_token(ch)
        if head is None or head.lemma in AUXILIARY_LEMMAS:
            continue
        entry = lexicon.get(head.lemma)
        if entry is not None:
            return ch, entry
    return None


def label_roles(sentence: AnalyzedSentence, lexicon: VerbLexicon) -> tuple[str, dict[str, Filler]]:
    """Assign semantic roles to the sentence's chunks.

    Returns the matched verb lemma and a role -> filler map. Raises
    NoVerbEntry when no VP head is covered by the lexicon, which signals
    that the sentence falls back to chunk matching downstream.
    """
    found = _main_verb(sentence, lexicon)
    if found is None:
        heads = [sentence.head_token(c) for c in sentence.chunks if c.label == "VP"]
        lemmas = sorted({h.lemma for h in heads if h is not None})
        raise NoVerbEntry(f"no verb lexicon entry for: {', '.join(lemmas) or 'no verb found'}")
    vp, entry = found
    nps = [c for c in sentence.chunks if c.label == "NP"]
    pps = [c for c in sentence.chunks if c.label == "PP"]

    assigned: dict[str, Filler] = {}
    used: set[Chunk] = set()

    before = [c for c in nps if c.end <= vp.start]
    after = [c for c in nps if c.start >= vp.end]
    if before:
        subject = before[-1]
        assigned[entry.subject_role] = _filler(sentence, subject)
        used.add(subject)
    if entry.object_role and after:
        obj = after[0]
        assigned[entry.object_role] = _filler(sentence, obj)
        used.add(obj)
    for pp in pps:
        prep = sentence.tagged[pp.start].surface.lower()
        for slot in entry.pp_slots:
            if prep in slot.prepositions and slot.role not in assigned:
                assigned[slot.role] = _filler(sentence, pp)
                used.add(pp)
                break

    # Leftover NPs in front of the verb: an English question fronts the
    # asked-about constituent, so non-wh leftovers take the next open slot
    # and a bare question word is rewritten into the slot it stands for.
    leftovers = [c for c in before if c not in used]
    slot_order = ([entry.object_role] if entry.object_role else []) + [s.role for s in entry.pp_slots]
    wh_leftover = None
    for ch in leftovers:
        if _is_bare_wh(sentence, ch):
            wh_leftover = ch
            continue
        for role in slot_order:
            if role not in assigned:
                assigned[role] = _filler(sentence, ch)
                break
    if wh_leftover is not None:
        role = _wh_target_role(sentence, wh_leftover, entry, assigned)
        if role is not None:
            assigned[role] = _filler(sentence, wh_leftover)
    return entry.lemma, assigned


def _wh_target_role(sentence, wh_chunk, entry: VerbEntry, assigned) -> str | None:
    word = sentence.chunk_tokens(wh_chunk)[0].surface.lower()
    following = sentence.tagged[wh_chunk.end].surface.lower() if wh_chunk.end < len(sentence.tagged) else ""
    candidates: list[str]
    if word in {"who", "whose"}:
        candidates = [entry.subject_role] + ([entry.object_role] if entry.object_role else [])
    elif word in {"whom", "what", "which"}:
        candidates = ([entry.object_role] if entry.object_role else []) + [s.role for s in entry.pp_slots]
    elif word == "where":
        candidates = [r for r in entry.roles() if r == "LOCATION"]
    elif word == "when" or (word == "how" and following == "long"):
        candidates = [r for r in entry.roles() if r == "TIME"]
    else:
        return None
    for role in candidates:
        if role not in assigned:
            return role
    return None


def instantiate_frame(
    roles: dict[str, Filler],
    verb_lemma: str,
    lexicon: VerbLexicon,
    event_id: str = "E",
) -> SemanticFrame:
    """Substitute role bindings into the verb's predicate templates.

    Question-word fillers become the WH placeholder; template predicates
    that reference an unbound role are dropped.
    """
    entry = lexicon[verb_lemma]
    bindings: dict[str, Filler] = {}
    for role, filler in roles.items():
        if filler.is_wh:
            bindings[role] = Filler(WH, WH, True, "wh-word")
        else:
            bindings[role] = filler
    predicates = tuple(
        pred for pred in entry.template if all(arg in bindings for arg in pred.args)
    )
    return SemanticFrame(event_id, verb_lemma, bindings, predicates, entry.ontology_property)


def frame_similarity(
    q: SemanticFrame,
    a: SemanticFrame,
    weights: tuple[float, float, float] = SIMILARITY_WEIGHTS,
) -> float:
    """Weighted frame-to-frame similarity in [0, 1].

    P: Jaccard overlap of predicate signatures (name, time anchor, role
       slots); two empty predicate sets count as a full match.
    R: fraction of the question frame's bound roles whose filler head
       lemma equals the answer frame's filler for the same role. A WH
       filler matches any answer filler.
    V: exact verb lemma match.
    """
    w_pred, w_role, w_verb = weights
    q_sigs = {p.signature() for p in q.predicates}
    a_sigs = {p.signature() for p in a.predicates}
    if not q_sigs and not a_sigs:
        p_score = 1.0
    else:
        union = q_sigs | a_sigs
        p_score = len(q_sigs & a_sigs) / len(union)
    if q.bindings:
        satisfied = 0
        for role, filler in q.bindings.items():
            other = a.bindings.get(role)
            if other is None:
                continue
            if filler.is_wh or filler.head_lemma == other.head_lemma:
                satisfied += 1
        r_score = satisfied / len(q.bindings)
    else:
        r_score = 0.0
    v_score = 1.0 if q.verb_lemma == a.verb_lemma else 0.0
    return w_pred * p_score + w_role * r_score + w_verb * v_score
