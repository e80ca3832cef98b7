import json
from pathlib import Path

import pytest

from verifact.corpus import load_corpus

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def lpp_corpus():
    return load_corpus(FIXTURES / "lpp_fixture.jsonl", name="lpp")


@pytest.fixture(scope="session")
def ff_corpus():
    return load_corpus(FIXTURES / "ff_fixture.jsonl", name="ff")


@pytest.fixture(scope="session")
def lpp_manifest():
    return json.loads((FIXTURES / "lpp_manifest.json").read_text())


@pytest.fixture(scope="session")
def ff_manifest():
    return json.loads((FIXTURES / "ff_manifest.json").read_text())


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES
