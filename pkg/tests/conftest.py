import pathlib

import pytest

from clott.elaborate import typecheck_file
from clott.parser import parse_file

ROOT = pathlib.Path(__file__).resolve().parent.parent
CORPUS_FILES = ["streams.clott", "lifting.clott", "universe.clott"]


def corpus_path(name: str) -> pathlib.Path:
    return ROOT / "corpus" / name


def load_program(name: str):
    path = corpus_path(name)
    prog = typecheck_file(parse_file(path.read_text(), str(path)))
    bad = [r for r in prog.reports if not r.ok]
    assert not bad, bad
    return prog


@pytest.fixture(scope="session")
def streams():
    return load_program("streams.clott")


@pytest.fixture(scope="session")
def lifting():
    return load_program("lifting.clott")


@pytest.fixture(scope="session")
def universe():
    return load_program("universe.clott")


@pytest.fixture(scope="session")
def corpus(streams, lifting, universe):
    return [streams, lifting, universe]
