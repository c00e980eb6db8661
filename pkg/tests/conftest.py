from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from riskcal import catalog, curation, workflow
from riskcal.catalog import FixtureSource, bundled_corpus_path
from riskcal.qi import load_default_dictionary


@pytest.fixture(scope="session")
def dictionary():
    return load_default_dictionary()


@pytest.fixture(scope="session")
def corpus_path() -> Path:
    return bundled_corpus_path()


@pytest.fixture(scope="session")
def source(corpus_path):
    return FixtureSource(corpus_path)


@pytest.fixture(scope="session")
def all_metadata(source, dictionary):
    out = []
    for portal in catalog.discover_portals(source):
        out.extend(catalog.harvest_metadata(portal, source, dictionary))
    return out


@pytest.fixture(scope="session")
def labeled_manifest(all_metadata, dictionary, corpus_path):
    manifest = curation.build_manifest(all_metadata, dictionary)
    manifest = curation.apply_labels_file(manifest, corpus_path / "labels.json")
    _, manifest = curation.build_collection(manifest)
    return manifest


@pytest.fixture(scope="session")
def collection(labeled_manifest):
    selected, _ = curation.build_collection(labeled_manifest)
    return selected


@pytest.fixture(scope="session")
def manifest_path(labeled_manifest, tmp_path_factory) -> Path:
    root = tmp_path_factory.mktemp("manifest")
    path = root / "collection.jsonl"
    curation.save_manifest(labeled_manifest, path)
    return path


@pytest.fixture(scope="session")
def ctx(manifest_path, corpus_path, dictionary):
    return workflow.WorkflowContext.from_paths(manifest_path, corpus_path, dictionary)


@pytest.fixture(scope="session")
def meta_by_id(all_metadata):
    return {m.dataset_id: m for m in all_metadata}


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance" in report.nodeid:
        name = report.nodeid.split("::")[-1]
        outcome = "PASS" if report.passed else ("FAIL" if report.failed else "SKIP")
        print(f"[acceptance] {name}: {outcome}", flush=True)
