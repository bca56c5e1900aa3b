import json
import os
from importlib import resources

import pytest


def pytest_runtest_logreport(report):
    """One pass/fail line per acceptance criterion."""
    if report.when != "call" or "test_acceptance" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    status = "PASS" if report.passed else "FAIL"
    print(f"\n[{status}] {name}", flush=True)

from ideafacets.config import resolve_config
from ideafacets.corpus import load_corpus
from ideafacets.embeddings import SpanEmbedder, load_stopwords, load_vectors
from ideafacets.pipeline import Bundle, build_bundle
from ideafacets.search import build_search_index


def data_path(name: str):
    return resources.files("ideafacets").joinpath(f"data/{name}")


@pytest.fixture(scope="session")
def fixture_payload():
    with data_path("fixture_scenarios.json").open(encoding="utf-8") as fh:
        return json.load(fh)


@pytest.fixture(scope="session")
def fixture_config(fixture_payload):
    return resolve_config(cli_values=fixture_payload["build_config"], env={})


@pytest.fixture(scope="session")
def fixture_corpus():
    corpus, _ = load_corpus(data_path("fixture_corpus.jsonl"))
    return corpus


@pytest.fixture(scope="session")
def fixture_records():
    with data_path("fixture_corpus.jsonl").open(encoding="utf-8") as fh:
        return [json.loads(line) for line in fh if line.strip()]


@pytest.fixture(scope="session")
def fixture_table(fixture_config):
    return load_vectors(data_path("fixture_vectors.txt"), fixture_config.dim)


@pytest.fixture(scope="session")
def stopwords():
    return load_stopwords()


@pytest.fixture(scope="session")
def fixture_embedder(fixture_table):
    return SpanEmbedder(fixture_table)


@pytest.fixture(scope="session")
def fixture_index(fixture_corpus, fixture_embedder):
    return build_search_index(fixture_corpus, fixture_embedder)


@pytest.fixture(scope="session")
def oracle_table(fixture_table):
    """The fixture word vectors as plain lists for the pure-Python oracles."""
    return {word: [float(x) for x in vec] for word, vec in fixture_table.items()}


@pytest.fixture(scope="session")
def fixture_bundle(tmp_path_factory, fixture_config):
    out = tmp_path_factory.mktemp("bundle") / "fixture"
    previous = os.environ.get("SOURCE_DATE_EPOCH")
    os.environ["SOURCE_DATE_EPOCH"] = "1700000000"
    try:
        build_bundle(
            data_path("fixture_corpus.jsonl"),
            data_path("fixture_vectors.txt"),
            out,
            config=fixture_config,
        )
    finally:
        if previous is None:
            os.environ.pop("SOURCE_DATE_EPOCH", None)
        else:
            os.environ["SOURCE_DATE_EPOCH"] = previous
    return Bundle(out)
