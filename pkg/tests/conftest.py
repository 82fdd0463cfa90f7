import json
import os

import pytest

from housebound.harness import AnalysisConfig, bundled_corpus_path, run_corpus
from housebound.intpoly import IntPolynomial


def load_corpus():
    with open(bundled_corpus_path(), encoding="utf-8") as f:
        return [IntPolynomial.from_json(json.loads(line)) for line in f if line.strip()]


@pytest.fixture(scope="session")
def corpus_polys():
    return load_corpus()


@pytest.fixture(scope="session")
def corpus_report():
    jobs = min(4, os.cpu_count() or 1)
    return run_corpus(bundled_corpus_path(), AnalysisConfig(jobs=jobs))


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
