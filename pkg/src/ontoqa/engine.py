"""Engine configuration, corpus ingestion, persistence and the
end-to-end ask pipeline."""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .analysis import Analyzer, Lexicon
from .answers import (
    AnswerSet,
    DocSentence,
    extract_candidates,
    filter_candidates,
    generate_answer,
    rank_answers,
    relation_fallback,
)
from .frames import VerbLexicon, SIMILARITY_WEIGHTS
from .ontology import Ontology
from .question import EXPANSION_WEIGHTS, analyze_question, detect_frame
from .retrieval import ConceptIndex


class EngineError(Exception):
    pass


class InvalidQuestion(EngineError):
    pass


class IngestError(EngineError):
    pass


def _bundled(name: str) -> str:
    return str(resources.files("ontoqa").joinpath("data", name))


@dataclass
class EngineConfig:
    lexicon_path: str = field(default_factory=lambda: _bundled("lexicon.json"))
    verb_lexicon_path: str = field(default_factory=lambda: _bundled("verbs.json"))
    base_ontology_path: str = field(default_factory=lambda: _bundled("base_ontology.json"))
    ontology_path: str = "./ontology.json"  # populated ontology snapshot
    index_path: str = "./index.json"
    similarity_weights: tuple[float, float, float] = SIMILARITY_WEIGHTS
    expansion_weights: tuple[float, float] = EXPANSION_WEIGHTS
    retrieval_k: int = 10
    answer_count: int = 5

    def __post_init__(self):
        if any(w < 0 for w in self.similarity_weights + self.expansion_weights):
            raise EngineError("weights must be nonnegative")
        if abs(sum(self.similarity_weights) - 1.0) > 1e-9:
            raise EngineError("similarity weights must sum to 1")
        if self.retrieval_k < 1 or self.answer_count < 1:
            raise EngineError("retrieval_k and answer_count must be >= 1")
        for attr in ("lexicon_path", "verb_lexicon_path", "base_ontology_path"):
            path = Path(getattr(self, attr))
            if not path.exists():
                raise EngineError(f"{attr} does not exist: {path}")

    @classmethod
    def from_file(cls, path: str | Path | None = None) -> "EngineConfig":
        """Parse a key = value config file. Without an explicit path the
        default ./qa.config is used when present, bundled defaults
        otherwise; a missing explicit file is an error."""
        if path is None:
            default = Path("qa.config")
            return cls(**_parse_config_file(default)) if default.exists() else cls()
        path = Path(path)
        if not path.exists():
            raise EngineError(f"config file not found: {path}")
        return cls(**_parse_config_file(path))


def _parse_config_file(path: Path) -> dict:
    scalar_keys = {
        "lexicon_path": str, "verb_lexicon_path": str, "base_ontology_path": str,
        "ontology_path": str, "index_path": str,
        "retrieval_k": int, "answer_count": int,
    }
    values: dict = {}
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise EngineError(f"{path}:{lineno}: expected 'key = value'")
        key, _, raw = line.partition("=")
        key, raw = key.strip(), raw.strip()
        if key in scalar_keys:
            try:
                values[key] = scalar_keys[key](raw)
            except ValueError as exc:
                raise EngineError(f"{path}:{lineno}: bad value for {key}: {raw}") from exc
        elif key == "similarity_weights":
            values[key] = _parse_floats(raw, 3, path, lineno)
        elif key == "expansion_weights":
            values[key] = _parse_floats(raw, 2, path, lineno)
        else:
            raise EngineError(f"{path}:{lineno}: unknown config key '{key}'")
    return values


def _parse_floats(raw: str, count: int, path: Path, lineno: int) -> tuple:
    parts = raw.replace(",", " ").split()
    if len(parts) != count:
        raise EngineError(f"{path}:{lineno}: expected {count} numbers, got {raw!r}")
    try:
        return tuple(float(p) for p in parts)
    except ValueError as exc:
        raise EngineError(f"{path}:{lineno}: bad number in {raw!r}") from exc


@dataclass
class AskAnswer:
    precise_answer: str | None
    sentence: str
    doc_id: str
    score: float
    ontology_derived: bool = False

    def to_dict(self) -> dict:
        return {
            "precise_answer": self.precise_answer,
            "sentence": self.sentence,
            "doc_id": self.doc_id,
            "score": self.score,
            "ontology_derived": self.ontology_derived,
        }


@dataclass
class AskResponse:
    question: str
    focus: str
    frame_predicates: list[str]
    answers: list[AskAnswer]

    def to_dict(self) -> dict:
        return {
            "question": self.question,
            "focus": self.focus,
            "frame_predicates": self.frame_predicates,
            "answers": [a.to_dict() for a in self.answers],
        }


@dataclass
class IngestSummary:
    documents: int
    sentences: int
    triples_added: int
    skipped: list[tuple[str, str]]  # (file name, reason)

    def describe(self) -> str:
        lines = [
            f"ingested {self.documents} documents, {self.sentences} sentences, "
            f"{self.triples_added} triples added"
        ]
        for name, reason in self.skipped:
            lines.append(f"skipped {name}: {reason}")
        return "\n".join(lines)


class Engine:
    """Loads the immutable lexicons, the ontology and the index, and runs
    the question pipeline over them. Ingestion is a separate exclusive
    step; asking only reads."""

    def __init__(self, config: EngineConfig):
        self.config = config
        self.analyzer = Analyzer(Lexicon.load(config.lexicon_path))
        self.verbs = VerbLexicon.load(config.verb_lexicon_path)
        self.ontology: Ontology = Ontology.load(config.base_ontology_path)
        self.index: ConceptIndex | None = None
        self.corpus: dict[str, list[DocSentence]] = {}

    @classmethod
    def load(cls, config: EngineConfig) -> "Engine":
        """Engine over previously persisted index/ontology snapshots."""
        engine = cls(config)
        if Path(config.ontology_path).exists():
            engine.ontology = Ontology.load(config.ontology_path)
        if Path(config.index_path).exists():
            engine.index = ConceptIndex.load(config.index_path)
            engine._rebuild_corpus()
        return engine

    def _rebuild_corpus(self) -> None:
        """Re-derive the analyzed corpus from the sentence texts stored in
        the index snapshot. Analysis is deterministic, so this reproduces
        exactly what ingestion saw."""
        assert self.index is not None
        self.corpus = {}
        for doc_id, sentence_texts in self.index.documents.items():
            self.corpus[doc_id] = [
                self._doc_sentence(text, (doc_id, ordinal))
                for ordinal, text in enumerate(sentence_texts)
            ]

    def _doc_sentence(self, text: str, sentence_id: tuple[str, int]) -> DocSentence:
        analyzed = self.analyzer.analyze_sentence(text, sentence_id)
        frame = detect_frame(analyzed, self.verbs, event_id=f"{sentence_id[0]}:{sentence_id[1]}")
        return DocSentence(analyzed, frame)

    # -- ingestion ------------------------------------------------------

    def ingest(self, directory: str | Path) -> IngestSummary:
        directory = Path(directory)
        if not directory.is_dir():
            raise IngestError(f"not a directory: {directory}")
        files = sorted(directory.glob("*.txt"))
        if not files:
            raise IngestError(f"no .txt documents in {directory}")
        self.index = ConceptIndex(self.ontology)
        self.corpus = {}
        sentence_count = 0
        triples_added = 0
        skipped: list[tuple[str, str]] = []
        for file in files:
            try:
                text = file.read_text(encoding="utf-8")
            except (OSError, UnicodeDecodeError) as exc:
                skipped.append((file.name, str(exc)))
                continue
            doc_id = file.stem
            spans = self.analyzer.split_sentences(text)
            doc_sentences = [
                self._doc_sentence(span.text, (doc_id, ordinal))
                for ordinal, span in enumerate(spans)
            ]
            self.index.index_document(doc_id, [ds.analyzed for ds in doc_sentences])
            triples_added += self.ontology.populate_from_document(
                [ds.analyzed for ds in doc_sentences],
                [ds.frame for ds in doc_sentences],
            )
            self.corpus[doc_id] = doc_sentences
            sentence_count += len(doc_sentences)
        if not self.corpus:
            raise IngestError(f"no readable documents in {directory}")
        self.index.save(self.config.index_path)
        self.ontology.save(self.config.ontology_path)
        return IngestSummary(len(self.corpus), sentence_count, triples_added, skipped)

    # -- asking ----------------------------------------------------------

    def ask(self, question: str, k: int | None = None) -> AskResponse:
        if not question or not question.strip():
            raise InvalidQuestion("the question is empty")
        if self.index is None:
            raise EngineError(
                f"no index loaded; run ingest first (expected {self.config.index_path})"
            )
        analysis = analyze_question(
            question, self.analyzer, self.verbs, self.ontology,
            self.config.expansion_weights,
        )
        ranked_docs = self.index.retrieve(analysis.concept_query, k or self.config.retrieval_k)
        candidates = extract_candidates(analysis, ranked_docs, self.corpus)
        kept = filter_candidates(candidates, analysis.focus)
        answer_set: AnswerSet = rank_answers(kept, analysis, self.config.similarity_weights)
        answers = []
        for cand in answer_set.answers[: self.config.answer_count]:
            answers.append(
                AskAnswer(
                    precise_answer=generate_answer(cand, analysis),
                    sentence=cand.sentence_text,
                    doc_id=cand.doc_id,
                    score=cand.score,
                    ontology_derived=cand.ontology_derived,
                )
            )
        if not answers:
            derived = relation_fallback(analysis, self.ontology)
            if derived is not None:
                answers.append(
                    AskAnswer(
                        precise_answer=derived.precise_answer,
                        sentence=derived.sentence_text,
                        doc_id=derived.doc_id,
                        score=derived.score,
                        ontology_derived=True,
                    )
                )
        frame_predicates = (
            analysis.frame.render_predicates() if analysis.frame is not None else []
        )
        return AskResponse(question.strip(), analysis.focus, frame_predicates, answers)

    # -- export ------------------------------------------------------------

    def export_ontology(self, out_path: str | Path) -> Path:
        out_path = Path(out_path)
        self.ontology.save(out_path)
        return out_path

    def ontology_stats(self) -> dict[str, int]:
        return self.ontology.stats()
