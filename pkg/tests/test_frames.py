import json

import pytest
from hypothesis import given, settings, strategies as st

from ontoqa.frames import (
    WH,
    Filler,
    FramePredicate,
    NoVerbEntry,
    SemanticFrame,
    VerbLexicon,
    VerbLexiconError,
    frame_similarity,
    instantiate_frame,
    label_roles,
)


def analyze(analyzer, sentence):
    return analyzer.analyze_sentence(sentence, ("t", 0))


# -- role labeling ------------------------------------------------------------


def test_label_roles_balloon_question(analyzer, verbs):
    lemma, roles = label_roles(analyze(analyzer, "Who gave a balloon to the kid?"), verbs)
    assert lemma == "give"
    assert {r: f.text for r, f in roles.items()} == {
        "AGENT": "Who",
        "THEME": "a balloon",
        "RECIPIENT": "the kid",
    }


def test_label_roles_statement(analyzer, verbs):
    lemma, roles = label_roles(analyze(analyzer, "John gave a balloon to the kid."), verbs)
    assert lemma == "give"
    assert {r: f.text for r, f in roles.items()} == {
        "AGENT": "John",
        "THEME": "a balloon",
        "RECIPIENT": "the kid",
    }


def test_label_roles_no_entry(analyzer, verbs):
    with pytest.raises(NoVerbEntry):
        label_roles(analyze(analyzer, "The sun rose."), verbs)


def test_label_roles_whom_fronting(analyzer, verbs):
    lemma, roles = label_roles(analyze(analyzer, "Whom did John give a balloon?"), verbs)
    assert lemma == "give"
    assert roles["RECIPIENT"].is_wh
    assert roles["AGENT"].text == "John"
    assert roles["THEME"].text == "a balloon"


def test_label_roles_where_fronting(analyzer, verbs):
    lemma, roles = label_roles(analyze(analyzer, "Where did John sleep?"), verbs)
    assert lemma == "sleep"
    assert roles["LOCATION"].is_wh
    assert roles["AGENT"].text == "John"


def test_label_roles_pp_by_preposition(analyzer, verbs):
    lemma, roles = label_roles(analyze(analyzer, "John slept in the barn."), verbs)
    assert lemma == "sleep"
    assert roles["LOCATION"].text == "the barn"


# -- frame instantiation --------------------------------------------------------

GOLDEN_PREDICATES = [
    "has_possession(start(E), Agent, Theme)",
    "has_possession(end(E), Recipient, Theme)",
    "transfer(during(E), Theme)",
]


def normalize_ws(s):
    return " ".join(s.split())


def test_instantiate_question_frame(analyzer, verbs):
    lemma, roles = label_roles(analyze(analyzer, "Who gave a balloon to the kid?"), verbs)
    frame = instantiate_frame(roles, lemma, verbs)
    assert [normalize_ws(p) for p in frame.render_predicates()] == [
        normalize_ws(p) for p in GOLDEN_PREDICATES
    ]
    assert frame.bindings["AGENT"].text == WH
    assert frame.wh_role() == "AGENT"


def test_instantiate_statement_frame(analyzer, verbs):
    lemma, roles = label_roles(analyze(analyzer, "John gave a balloon to the kid."), verbs)
    frame = instantiate_frame(roles, lemma, verbs)
    assert frame.render_predicates() == GOLDEN_PREDICATES
    assert frame.bindings["AGENT"].text == "John"
    assert frame.wh_role() is None


def test_instantiate_drops_unbound_predicates(verbs):
    roles = {
        "AGENT": Filler("John", "john"),
        "THEME": Filler("a balloon", "balloon"),
    }
    frame = instantiate_frame(roles, "give", verbs)
    names = [(p.name, p.time_anchor) for p in frame.predicates]
    assert ("has_possession", "start") in names
    assert ("transfer", "during") in names
    assert ("has_possession", "end") not in names  # references RECIPIENT


# -- similarity -------------------------------------------------------------------


def question_frame(analyzer, verbs, text):
    lemma, roles = label_roles(analyze(analyzer, text), verbs)
    return instantiate_frame(roles, lemma, verbs)


def test_similarity_golden_pair_is_one(analyzer, verbs):
    q = question_frame(analyzer, verbs, "Who gave a balloon to the kid?")
    a = question_frame(analyzer, verbs, "John gave a balloon to the kid.")
    assert frame_similarity(q, a) == pytest.approx(1.0, abs=1e-9)


def test_similarity_identity(analyzer, verbs):
    f = question_frame(analyzer, verbs, "John gave a balloon to the kid.")
    assert frame_similarity(f, f) == pytest.approx(1.0)


def test_similarity_disjoint_is_zero(analyzer, verbs):
    # P, R and V are all zero by construction: no shared predicate
    # signature, no matching role filler, different verbs.
    give = question_frame(analyzer, verbs, "John gave a balloon to the kid.")
    sleep = question_frame(analyzer, verbs, "Mary slept in the barn.")
    assert frame_similarity(give, sleep) == 0.0


def test_similarity_wh_matches_any_filler(analyzer, verbs):
    q = question_frame(analyzer, verbs, "Who gave a balloon to the kid?")
    a = question_frame(analyzer, verbs, "Mary gave a balloon to the kid.")
    assert frame_similarity(q, a) == pytest.approx(1.0)


# property-test frames over a small pool

_PRED_POOL = [
    FramePredicate("has_possession", "start", ("AGENT", "THEME")),
    FramePredicate("has_possession", "end", ("RECIPIENT", "THEME")),
    FramePredicate("transfer", "during", ("THEME",)),
    FramePredicate("motion", "during", ("AGENT",)),
    FramePredicate("at_location", "end", ("AGENT", "LOCATION")),
]
_WORDS = ["john", "mary", "balloon", "kid", "barn", "dog"]


@st.composite
def frames(draw):
    verb = draw(st.sampled_from(["give", "sleep", "run"]))
    preds = tuple(draw(st.lists(st.sampled_from(_PRED_POOL), unique=True, max_size=4)))
    roles = sorted({arg for p in preds for arg in p.args}
                   | set(draw(st.lists(st.sampled_from(["AGENT", "THEME"]), max_size=2))))
    bindings = {}
    for role in roles:
        word = draw(st.sampled_from(_WORDS))
        bindings[role] = Filler(word, word)
    return SemanticFrame("E", verb, bindings, preds)


@given(frames(), frames())
@settings(max_examples=300)
def test_similarity_range(q, a):
    score = frame_similarity(q, a)
    assert 0.0 <= score <= 1.0


@given(frames())
@settings(max_examples=200)
def test_similarity_identity_property(f):
    if f.bindings:
        assert frame_similarity(f, f) == pytest.approx(1.0)


def _rename(frame, suffix="_x"):
    bindings = {
        role: Filler(fil.text + suffix, fil.head_lemma + suffix, fil.is_wh)
        for role, fil in frame.bindings.items()
    }
    return SemanticFrame(frame.event_id, frame.verb_lemma, bindings, frame.predicates)


@given(frames(), st.lists(frames(), min_size=2, max_size=5))
@settings(max_examples=150)
def test_similarity_argmax_invariance(q, candidates):
    """Ranking depends on lemma equality, not surface identity."""
    before = sorted(range(len(candidates)),
                    key=lambda i: (-frame_similarity(q, candidates[i]), i))
    q2 = _rename(q)
    renamed = [_rename(c) for c in candidates]
    after = sorted(range(len(renamed)),
                   key=lambda i: (-frame_similarity(q2, renamed[i]), i))
    assert before == after


@given(frames(), frames())
@settings(max_examples=200)
def test_wh_substitution_dominance(q, a):
    """Binding WH to the answer's filler never decreases similarity."""
    for role in list(q.bindings):
        wh_bindings = dict(q.bindings)
        wh_bindings[role] = Filler(WH, WH, True)
        q_wh = SemanticFrame(q.event_id, q.verb_lemma, wh_bindings, q.predicates)
        if role in a.bindings:
            substituted = dict(q.bindings)
            substituted[role] = a.bindings[role]
            q_sub = SemanticFrame(q.event_id, q.verb_lemma, substituted, q.predicates)
            assert frame_similarity(q_sub, a) >= frame_similarity(q_wh, a) - 1e-12


# -- verb lexicon validation --------------------------------------------------------


def write_verbs(tmp_path, entries):
    path = tmp_path / "verbs.json"
    path.write_text(json.dumps(entries), encoding="utf-8")
    return path


def test_verb_lexicon_unknown_role(tmp_path):
    entries = [{"lemma": "zorp", "pattern": {"subject": "DOER"}, "predicates": []}]
    with pytest.raises(VerbLexiconError, match="zorp"):
        VerbLexicon.load(write_verbs(tmp_path, entries))


def test_verb_lexicon_duplicate_role(tmp_path):
    entries = [{
        "lemma": "zorp",
        "pattern": {"subject": "AGENT", "object": "AGENT"},
        "predicates": [],
    }]
    with pytest.raises(VerbLexiconError, match="at most one slot"):
        VerbLexicon.load(write_verbs(tmp_path, entries))


def test_verb_lexicon_unbound_template_role(tmp_path):
    entries = [{
        "lemma": "zorp",
        "pattern": {"subject": "AGENT"},
        "predicates": [{"name": "p", "time": "during", "args": ["THEME"]}],
    }]
    with pytest.raises(VerbLexiconError, match="THEME"):
        VerbLexicon.load(write_verbs(tmp_path, entries))


def test_verb_lexicon_loads_bundled(verbs):
    assert "give" in verbs
    entry = verbs["give"]
    assert entry.subject_role == "AGENT"
    assert entry.ontology_property == "gives_to"
