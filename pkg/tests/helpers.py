"""Shared construction helpers for tests."""

from __future__ import annotations

import random

from riskcal.catalog import DatasetMetadata, RecordTable, ResourceKind
from riskcal.qi import AttributeDescriptor, QuasiIdentifierDictionary, load_default_dictionary

DEFAULT_DICTIONARY = load_default_dictionary()


def make_table(
    columns: dict[str, list[str]],
    dictionary: QuasiIdentifierDictionary | None = None,
) -> RecordTable:
    dictionary = dictionary or DEFAULT_DICTIONARY
    attrs = tuple(AttributeDescriptor.from_raw(name, dictionary) for name in columns)
    lengths = {len(v) for v in columns.values()}
    assert len(lengths) == 1, "columns must be equal length"
    rows = tuple(tuple(str(v) for v in row) for row in zip(*columns.values()))
    return RecordTable(attributes=attrs, rows=rows)


def make_meta(
    portal: str,
    dataset_id: str,
    attr_names: list[str],
    kind: ResourceKind = ResourceKind.DATASET,
    dictionary: QuasiIdentifierDictionary | None = None,
    title: str | None = None,
) -> DatasetMetadata:
    dictionary = dictionary or DEFAULT_DICTIONARY
    return DatasetMetadata(
        portal=portal,
        dataset_id=dataset_id,
        title=title or dataset_id,
        description="",
        resource_kind=kind,
        attributes=tuple(AttributeDescriptor.from_raw(n, dictionary) for n in attr_names),
        row_count=None,
        fetched_at="2024-01-01T00:00:00Z",
    )


WALKTHROUGH_AXES = ["victim race", "offender gender", "disposition"]


def police_walkthrough(session):
    """The canonical fixture triage: police profile to disclosure candidates."""
    from riskcal import workflow

    workflow.set_quasi_identifiers(session, "profile:police")
    outputs = {"cluster": workflow.run_step(session, "cluster", {})}
    outputs["pairs"] = workflow.run_step(session, "pairs", {})
    outputs["join"] = workflow.run_step(session, "join", {})
    outputs["parallel_sets"] = workflow.run_step(
        session, "parallel_sets", {"axes": WALKTHROUGH_AXES}
    )
    outputs["disclosures"] = workflow.run_step(session, "disclosures", {})
    return outputs


def random_table(
    rng: random.Random,
    max_rows: int = 200,
    max_attrs: int = 6,
    alphabet_size: int = 6,
    allow_empty_cells: bool = False,
) -> RecordTable:
    n_attrs = rng.randint(1, max_attrs)
    n_rows = rng.randint(1, max_rows)
    names = [f"col{i}" for i in range(n_attrs)]
    values = [f"v{i}" for i in range(alphabet_size)]
    if allow_empty_cells:
        values = values + [""]
    columns = {
        name: [rng.choice(values) for _ in range(n_rows)] for name in names
    }
    return make_table(columns)
