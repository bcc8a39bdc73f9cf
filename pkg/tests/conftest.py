"""Shared fixtures: a small trained detector and the synthetic corpora."""

from __future__ import annotations

import pytest

from capeval.detector import Corruptor, TrainConfig, build_synthetic_dataset, train_detector

from synthcorpus import make_clean_captions


@pytest.fixture(scope="session")
def clean_corpus() -> list[str]:
    return make_clean_captions(2500, seed=11)


@pytest.fixture(scope="session")
def corruptor(clean_corpus) -> Corruptor:
    return Corruptor(clean_corpus)


@pytest.fixture(scope="session")
def synthetic_dataset(clean_corpus):
    return build_synthetic_dataset(clean_corpus, seed=23)


@pytest.fixture(scope="session")
def detector_split(synthetic_dataset):
    """(train, held-out) 80/20 split of the synthetic dataset."""
    records = synthetic_dataset.records
    n_hold = len(records) // 5
    return records[n_hold:], records[:n_hold]


@pytest.fixture(scope="session")
def detector_model(detector_split):
    train, _ = detector_split
    return train_detector(train, TrainConfig(seed=5))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One PASS/FAIL line per acceptance criterion at the end of the run."""
    seen = {}
    for status in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(status, []):
            if "test_acceptance" in report.nodeid:
                ok = status == "passed"
                name = report.nodeid.split("::")[-1]
                seen[name] = seen.get(name, True) and ok
    if seen:
        terminalreporter.write_sep("-", "acceptance criteria")
        for name, ok in sorted(seen.items()):
            terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {name}")
