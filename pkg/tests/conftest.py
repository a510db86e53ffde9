from __future__ import annotations

import pytest

from ssm_loom import fixture_corpus
from ssm_loom.io import load_corpus, load_glossary, load_joins

# one line per acceptance criterion, filled by tests/test_acceptance.py
ACCEPTANCE: dict[int, tuple[str, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        status, text = ACCEPTANCE[n]
        terminalreporter.write_line(f"[{status}] criterion {n}: {text}")


@pytest.fixture(scope="session")
def corpus_dir():
    return fixture_corpus()


@pytest.fixture(scope="session")
def corpus(corpus_dir):
    return load_corpus(corpus_dir)


@pytest.fixture(scope="session")
def glossary(corpus_dir):
    return load_glossary(corpus_dir / "glossary.json")


@pytest.fixture(scope="session")
def joins(corpus_dir):
    return load_joins(corpus_dir / "joins.json")
