import pathlib

import pytest

from profpres.dsl import parse_path_for, parse_workspace
from profpres.prover import Budget

DATA = pathlib.Path(__file__).parent / "data"
CORPUS = DATA / "corpus.prof"


@pytest.fixture(scope="session")
def corpus_text() -> str:
    return CORPUS.read_text()


@pytest.fixture(scope="session")
def ws(corpus_text):
    return parse_workspace(corpus_text, str(CORPUS))


@pytest.fixture(scope="session")
def budget():
    return Budget()


@pytest.fixture(scope="session")
def small_budget():
    return Budget(max_path_length=5, max_closure_rounds=10, max_kb_steps=300)


@pytest.fixture(scope="session")
def pathin(ws):
    """pathin('M', 'f.g') -> Path; works on instances and uncurried too."""

    def _parse(entity_name: str, text: str):
        return parse_path_for(ws[entity_name], text)

    return _parse
