import pytest

from ontoqa.analysis import Analyzer, Lexicon
from ontoqa.engine import Engine, EngineConfig, _bundled
from ontoqa.frames import VerbLexicon
from ontoqa.ontology import Ontology


@pytest.fixture(scope="session")
def lexicon() -> Lexicon:
    return Lexicon.load(_bundled("lexicon.json"))


@pytest.fixture(scope="session")
def analyzer(lexicon) -> Analyzer:
    return Analyzer(lexicon)


@pytest.fixture(scope="session")
def verbs() -> VerbLexicon:
    return VerbLexicon.load(_bundled("verbs.json"))


@pytest.fixture(scope="session")
def base_ontology() -> Ontology:
    return Ontology.load(_bundled("base_ontology.json"))


@pytest.fixture()
def empty_ontology() -> Ontology:
    return Ontology()


GOLDEN_DOC = (
    "John gave a balloon to the kid. The balloon was red. "
    "Mary slept in the barn."
)


@pytest.fixture()
def golden_corpus(tmp_path):
    """One document holding the golden give-sentence plus distractors."""
    corpus = tmp_path / "corpus"
    corpus.mkdir()
    (corpus / "golden.txt").write_text(GOLDEN_DOC, encoding="utf-8")
    return corpus


@pytest.fixture()
def golden_engine(tmp_path, golden_corpus) -> Engine:
    config = EngineConfig(
        index_path=str(tmp_path / "index.json"),
        ontology_path=str(tmp_path / "ontology.json"),
    )
    engine = Engine(config)
    engine.ingest(golden_corpus)
    return engine


@pytest.fixture(scope="session")
def story_engine(tmp_path_factory) -> Engine:
    """Engine over the bundled story corpus; shared across tests."""
    tmp = tmp_path_factory.mktemp("story")
    config = EngineConfig(
        index_path=str(tmp / "index.json"),
        ontology_path=str(tmp / "ontology.json"),
    )
    engine = Engine(config)
    engine.ingest(_bundled("corpus"))
    return engine
