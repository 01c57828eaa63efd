from __future__ import annotations

import time
from pathlib import Path

import pytest

from wordship.classify import Kind, Lexicons, classify_corpus
from wordship.context import LexiconProvider, assign_degrees, resolve_contexts
from wordship.corpus import load_corpus_file

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = FIXTURES / "golden"
SUITE_BUDGET_SECONDS = 60.0


def pytest_configure(config):
    config._acceptance_lines = []
    config._session_start = time.perf_counter()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", [])
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in lines:
        terminalreporter.write_line(line)
    elapsed = time.perf_counter() - config._session_start
    verdict = "PASS" if elapsed < SUITE_BUDGET_SECONDS else "FAIL"
    terminalreporter.write_line(f"[{verdict}] full suite runtime {elapsed:.1f}s (budget {SUITE_BUDGET_SECONDS:.0f}s)")


@pytest.fixture()
def record_criterion(request):
    """Record one pass/fail line for an acceptance criterion."""

    def record(number: int, ok: bool, detail: str) -> None:
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}"
        print(line)
        request.config._acceptance_lines.append(line)

    return record


@pytest.fixture(scope="session")
def golden_dir() -> Path:
    return GOLDEN


@pytest.fixture(scope="session")
def golden_lexicons() -> Lexicons:
    return Lexicons.load(eponyms=GOLDEN / "eponyms.txt")


@pytest.fixture(scope="session")
def golden_corpus(golden_lexicons):
    return load_corpus_file(GOLDEN / "corpus.csv", lexicons=golden_lexicons)


@pytest.fixture(scope="session")
def golden_providers():
    return [LexiconProvider.from_tsv(GOLDEN / f"{n}.tsv", n) for n in ("dictionary", "encyclopedia")]


@pytest.fixture(scope="session")
def golden_contexts(golden_corpus, golden_providers):
    cats = classify_corpus(golden_corpus)
    return resolve_contexts([w for w, c in cats.items() if c.kind is Kind.SW], golden_providers)


@pytest.fixture(scope="session")
def golden_assignment(golden_corpus, golden_contexts):
    return assign_degrees(classify_corpus(golden_corpus), golden_contexts)
