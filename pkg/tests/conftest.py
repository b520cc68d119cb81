import json
from importlib import resources

import pytest

FIXTURES = resources.files("accessfix") / "fixtures"


@pytest.fixture(scope="session")
def corpus_dir():
    return FIXTURES / "corpus"


@pytest.fixture(scope="session")
def rules_dir():
    return FIXTURES / "rules"


@pytest.fixture(scope="session")
def corpus_manifest(corpus_dir):
    return json.loads((corpus_dir / "manifest.json").read_text("utf-8"))


@pytest.fixture(scope="session")
def rules_manifest(rules_dir):
    return json.loads((rules_dir / "manifest.json").read_text("utf-8"))


@pytest.fixture(scope="session")
def corpus_paths(corpus_dir, corpus_manifest):
    return [str(corpus_dir / name) for name in sorted(corpus_manifest)]
