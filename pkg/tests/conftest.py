import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

INSTANCES = Path(__file__).resolve().parent.parent / "instances"


@pytest.fixture(scope="session")
def corpus_cache(tmp_path_factory):
    return tmp_path_factory.mktemp("corpus-cache")


@pytest.fixture(scope="session")
def small_corpus(corpus_cache):
    from mfrag.corpus import load_corpus

    return (
        load_corpus("catalog")
        + load_corpus("all-gf2-upto(8)", corpus_cache)
        + load_corpus("all-gf3-upto(8)", corpus_cache)
    )


@pytest.fixture
def instances():
    return INSTANCES
