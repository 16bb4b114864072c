import numpy as np
import pytest

from commaclf.corpus import Corpus, Instance, LabelTriple, TASK_CLASSES, TASKS


def pytest_runtest_logreport(report):
    # Acceptance tests print their own PASS lines; mirror failures the same way.
    if report.when == "call" and report.failed and "test_acceptance" in report.nodeid:
        name = report.nodeid.split("::")[-1]
        print(f"\nACCEPTANCE FAIL  {name}")


def make_labeled_corpus(texts_and_triples, name="test"):
    instances = tuple(
        Instance(f"d{i:03d}", text, LabelTriple(*triple)) for i, (text, triple) in enumerate(texts_and_triples)
    )
    return Corpus(name, instances, labeled=True)


def random_labeled_corpus(rng: np.random.Generator, n_docs: int, vocab: list[str], name="rand"):
    """Random texts over a small vocabulary with random label triples."""
    rows = []
    for _ in range(n_docs):
        length = int(rng.integers(1, 8))
        text = " ".join(vocab[int(j)] for j in rng.integers(0, len(vocab), size=length))
        triple = tuple(TASK_CLASSES[task][int(rng.integers(len(TASK_CLASSES[task])))] for task in TASKS)
        rows.append((text, triple))
    return make_labeled_corpus(rows, name)


@pytest.fixture
def rng():
    return np.random.default_rng(20240517)


@pytest.fixture
def four_doc_gender_corpus():
    """Two GEN docs containing "feat", two NGEN docs without it."""
    return make_labeled_corpus(
        [
            ("feat alpha", ("NAG", "GEN", "NCOM")),
            ("feat beta", ("NAG", "GEN", "NCOM")),
            ("other gamma", ("NAG", "NGEN", "NCOM")),
            ("other delta", ("NAG", "NGEN", "NCOM")),
        ]
    )
