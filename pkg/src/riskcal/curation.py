"""The curation funnel: all resources -> tabular -> QI-bearing -> human-curated.

Filtering is automatic; the human-subject judgment is never automated. The
manifest persists as line-delimited JSON (one entry per line) so manual
curation diffs cleanly, with stage counts in a `funnel.json` sidecar.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .catalog import DatasetMetadata, ResourceKind
from .errors import IncompleteLabeling, UnknownDataset
from .qi import QuasiIdentifierDictionary

DEFAULT_MIN_QI = 2

STAGE_ALL = "all-resources"
STAGE_TABULAR = "tabular"
STAGE_QI = "qi-filtered"
STAGE_CURATED = "curated"
STAGE_ORDER = (STAGE_ALL, STAGE_TABULAR, STAGE_QI, STAGE_CURATED)


class Relevance(str, Enum):
    HUMAN_SUBJECT = "human-subject"
    NON_HUMAN = "non-human"
    UNDECIDED = "undecided"


class Granularity(str, Enum):
    INDIVIDUAL = "individual-record"
    AGGREGATE = "aggregate"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class CurationLabel:
    relevance: Relevance
    granularity: Granularity = Granularity.UNKNOWN
    note: str | None = None
    labeled_at: str = ""

    def same_judgment(self, other: "CurationLabel") -> bool:
        return (
            self.relevance == other.relevance
            and self.granularity == other.granularity
            and self.note == other.note
        )

    def to_doc(self) -> dict:
        return {
            "relevance": self.relevance.value,
            "granularity": self.granularity.value,
            "note": self.note,
            "labeled_at": self.labeled_at,
        }

    @classmethod
    def from_doc(cls, doc: Mapping) -> "CurationLabel":
        return cls(
            relevance=Relevance(doc["relevance"]),
            granularity=Granularity(doc.get("granularity", "unknown")),
            note=doc.get("note"),
            labeled_at=doc.get("labeled_at", ""),
        )


@dataclass(frozen=True)
class ManifestEntry:
    metadata: DatasetMetadata
    qi_hits: tuple[str, ...]
    label: CurationLabel
    history: tuple[CurationLabel, ...] = ()

    def to_doc(self) -> dict:
        return {
            "metadata": self.metadata.to_doc(),
            "qi_hits": list(self.qi_hits),
            "label": self.label.to_doc(),
            "history": [h.to_doc() for h in self.history],
        }

    @classmethod
    def from_doc(cls, doc: Mapping) -> "ManifestEntry":
        return cls(
            metadata=DatasetMetadata.from_doc(doc["metadata"]),
            qi_hits=tuple(doc.get("qi_hits", ())),
            label=CurationLabel.from_doc(doc["label"]),
            history=tuple(CurationLabel.from_doc(h) for h in doc.get("history", ())),
        )


@dataclass(frozen=True)
class CollectionManifest:
    """QI-filtered entries keyed by (portal, dataset_id), plus funnel counts."""

    entries: Mapping[tuple[str, str], ManifestEntry]
    stage_counts: Mapping[str, int] = field(default_factory=dict)

    def entry(self, portal: str, dataset_id: str) -> ManifestEntry:
        try:
            return self.entries[(portal, dataset_id)]
        except KeyError:
            raise UnknownDataset(f"{portal}:{dataset_id}") from None

    def sorted_entries(self) -> list[ManifestEntry]:
        return [self.entries[k] for k in sorted(self.entries)]


def filter_tabular(metadata: Iterable[DatasetMetadata]) -> list[DatasetMetadata]:
    """Keep dataset-kind resources that actually declare attributes."""
    return [
        m
        for m in metadata
        if m.resource_kind is ResourceKind.DATASET and len(m.attributes) > 0
    ]


def filter_by_qi(
    datasets: Iterable[DatasetMetadata],
    dictionary: QuasiIdentifierDictionary,
    min_qi: int = DEFAULT_MIN_QI,
) -> list[tuple[DatasetMetadata, tuple[str, ...]]]:
    """Keep datasets carrying at least `min_qi` distinct quasi-identifier terms."""
    if min_qi < 1:
        raise ValueError("min_qi must be >= 1")
    out = []
    for meta in datasets:
        hits = dictionary.quasi_identifier_hits(a.normalized_name for a in meta.attributes)
        if len(hits) >= min_qi:
            out.append((meta, hits))
    return out


def build_manifest(
    all_metadata: Sequence[DatasetMetadata],
    dictionary: QuasiIdentifierDictionary,
    min_qi: int = DEFAULT_MIN_QI,
) -> CollectionManifest:
    """Run the automatic funnel stages and seed every entry as undecided."""
    tabular = filter_tabular(all_metadata)
    qi_filtered = filter_by_qi(tabular, dictionary, min_qi)
    entries = {
        (meta.portal, meta.dataset_id): ManifestEntry(
            metadata=meta,
            qi_hits=hits,
            label=CurationLabel(relevance=Relevance.UNDECIDED),
        )
        for meta, hits in qi_filtered
    }
    counts = {
        STAGE_ALL: len(all_metadata),
        STAGE_TABULAR: len(tabular),
        STAGE_QI: len(entries),
        STAGE_CURATED: 0,
    }
    return CollectionManifest(entries=entries, stage_counts=counts)


def label_dataset(
    manifest: CollectionManifest, portal: str, dataset_id: str, label: CurationLabel
) -> CollectionManifest:
    """Replace an entry's label, retaining prior labels in its history.

    Re-applying an identical judgment is a no-op, so labeling stays
    idempotent despite the append-only history.
    """
    current = manifest.entry(portal, dataset_id)
    if current.label.same_judgment(label):
        return manifest
    if (
        label.relevance is Relevance.HUMAN_SUBJECT
        and label.granularity is Granularity.UNKNOWN
    ):
        raise ValueError("human-subject labels need a known granularity")
    entries = dict(manifest.entries)
    entries[(portal, dataset_id)] = replace(
        current, label=label, history=current.history + (current.label,)
    )
    return CollectionManifest(entries=entries, stage_counts=dict(manifest.stage_counts))


def build_collection(
    manifest: CollectionManifest, strict: bool = False
) -> tuple[list[DatasetMetadata], CollectionManifest]:
    """Human-subject entries plus the manifest with its curated count updated.

    In strict mode any undecided entry among the QI-filtered set aborts with
    IncompleteLabeling; by default partial curation yields a usable
    collection.
    """
    if strict:
        undecided = [
            e.metadata.ref
            for e in manifest.sorted_entries()
            if e.label.relevance is Relevance.UNDECIDED
        ]
        if undecided:
            raise IncompleteLabeling(f"undecided entries remain: {undecided}")
    selected = [
        e.metadata
        for e in manifest.sorted_entries()
        if e.label.relevance is Relevance.HUMAN_SUBJECT
    ]
    counts = dict(manifest.stage_counts)
    counts[STAGE_CURATED] = len(selected)
    return selected, CollectionManifest(entries=manifest.entries, stage_counts=counts)


@dataclass(frozen=True)
class FunnelReport:
    stages: tuple[tuple[str, int], ...]
    individual: int
    aggregate: int

    def to_doc(self) -> dict:
        return {
            "stages": [{"name": name, "count": count} for name, count in self.stages],
            "granularity": {
                Granularity.INDIVIDUAL.value: self.individual,
                Granularity.AGGREGATE.value: self.aggregate,
            },
        }

    def render_text(self) -> str:
        chain = " → ".join(str(count) for _, count in self.stages)
        return f"{chain} ({self.individual}/{self.aggregate})"


def funnel_report(manifest: CollectionManifest) -> FunnelReport:
    """Ordered stage counts plus the individual/aggregate split of the curated stage."""
    curated = [
        e for e in manifest.sorted_entries() if e.label.relevance is Relevance.HUMAN_SUBJECT
    ]
    counts = dict(manifest.stage_counts)
    counts.setdefault(STAGE_CURATED, len(curated))
    stages = tuple((name, counts.get(name, 0)) for name in STAGE_ORDER)
    individual = sum(1 for e in curated if e.label.granularity is Granularity.INDIVIDUAL)
    aggregate = sum(1 for e in curated if e.label.granularity is Granularity.AGGREGATE)
    return FunnelReport(stages=stages, individual=individual, aggregate=aggregate)


def render_funnel_text(counts: Sequence[int], individual: int, aggregate: int) -> str:
    """Plain-text funnel rendering for arbitrary injected counts."""
    return " → ".join(str(c) for c in counts) + f" ({individual}/{aggregate})"


def funnel_json_bytes(report: FunnelReport) -> bytes:
    return (json.dumps(report.to_doc(), indent=2, sort_keys=True) + "\n").encode("utf-8")


def save_manifest(manifest: CollectionManifest, path: str | Path) -> None:
    path = Path(path)
    lines = [json.dumps(e.to_doc(), sort_keys=True) for e in manifest.sorted_entries()]
    path.write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")
    sidecar = path.parent / "funnel.json"
    sidecar.write_bytes(funnel_json_bytes(funnel_report(manifest)))


def load_manifest(path: str | Path) -> CollectionManifest:
    path = Path(path)
    entries = {}
    for line in path.read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        entry = ManifestEntry.from_doc(json.loads(line))
        entries[(entry.metadata.portal, entry.metadata.dataset_id)] = entry
    counts: dict[str, int] = {}
    sidecar = path.parent / "funnel.json"
    if sidecar.exists():
        doc = json.loads(sidecar.read_text(encoding="utf-8"))
        counts = {s["name"]: s["count"] for s in doc.get("stages", ())}
    return CollectionManifest(entries=entries, stage_counts=counts)


def apply_labels_file(manifest: CollectionManifest, path: str | Path) -> CollectionManifest:
    """Apply a committed labels document: a list of label rows keyed by dataset."""
    rows = json.loads(Path(path).read_text(encoding="utf-8"))
    for row in rows:
        label = CurationLabel(
            relevance=Relevance(row["relevance"]),
            granularity=Granularity(row.get("granularity", "unknown")),
            note=row.get("note"),
            labeled_at=row.get("labeled_at", ""),
        )
        manifest = label_dataset(manifest, row["portal"], row["dataset_id"], label)
    return manifest


def rejected_entries(manifest: CollectionManifest) -> list[ManifestEntry]:
    """QI-filtered entries current labels keep out of the curated collection."""
    return [
        e
        for e in manifest.sorted_entries()
        if e.label.relevance is not Relevance.HUMAN_SUBJECT
    ]
