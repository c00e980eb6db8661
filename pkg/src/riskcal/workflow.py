"""Session-oriented defender workflow: cluster, triage pairs, join, identify.

A DefenderSession advances along cluster -> pairs -> join; downstream state
clears whenever an upstream selection changes. Step outputs are plain JSON
documents with fully deterministic ordering, so replaying a recorded history
against the same fixture corpus reproduces byte-identical bytes. Wall-clock
timestamps live only in the history log and never enter step outputs or the
exported report.

Disclosure candidates leave the engine redacted (first character plus "X"
padding, dates coarsened to month); the unredacted report requires the
explicit acknowledgment gate.
"""

from __future__ import annotations

import json
import re
import uuid
from collections import Counter
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Mapping, Sequence

from . import clustering, joins
from .catalog import CatalogSource, DatasetMetadata, RecordTable, fetch_records, open_source
from .curation import build_collection, load_manifest
from .errors import (
    EmptyResult,
    EmptySelection,
    NothingToReport,
    RedactionNotAcknowledged,
    StepOutOfOrder,
    UnknownAttribute,
    UnknownCollection,
    UnknownDataset,
    UnknownProfile,
)
from .qi import QuasiIdentifierDictionary, SemanticClass, load_default_dictionary, normalize_attribute

OTHER_BUCKET = "⟨other⟩"
DEFAULT_MAX_CATEGORIES = 12

STEPS = ("cluster", "pairs", "join", "suggest", "parallel_sets", "disclosures")

_ISO_DATE = re.compile(r"^(\d{4})-(\d{2})(-\d{2}.*)?$")


def canonical_json(doc) -> bytes:
    """Stable byte serialization used for replay comparison and reports."""
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False).encode(
        "utf-8"
    )


def redact_value(value: str) -> str:
    """Mask a cell: dates keep year and month, other text keeps its first character."""
    m = _ISO_DATE.match(value)
    if m:
        return f"{m.group(1)}-{m.group(2)}"
    if len(value) <= 1:
        return value
    return value[0] + "X" * (len(value) - 1)


def _utc_now() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%S.%fZ")


class WorkflowContext:
    """Shared, read-only inputs of a triage workflow: collection, tables, dictionary."""

    def __init__(
        self,
        collection: Sequence[DatasetMetadata],
        source: CatalogSource,
        dictionary: QuasiIdentifierDictionary,
        row_limit: int | None = None,
        extra_metadata: Sequence[DatasetMetadata] = (),
    ):
        self.collection = list(collection)
        # every manifest entry stays addressable for ad-hoc joins and scans,
        # but clustering and the session workflow operate on the collection
        self.by_ref = {m.ref: m for m in extra_metadata}
        self.by_ref.update({m.ref: m for m in self.collection})
        self.source = source
        self.dictionary = dictionary
        self.row_limit = row_limit
        self._tables: dict[str, RecordTable] = {}

    @classmethod
    def from_paths(
        cls,
        manifest_path: str | Path,
        fixtures: str | Path,
        dictionary: QuasiIdentifierDictionary | None = None,
        row_limit: int | None = None,
    ) -> "WorkflowContext":
        manifest_path = Path(manifest_path)
        if not manifest_path.exists():
            raise UnknownCollection(str(manifest_path))
        manifest = load_manifest(manifest_path)
        collection, _ = build_collection(manifest)
        return cls(
            collection=collection,
            source=open_source(fixtures),
            dictionary=dictionary or load_default_dictionary(),
            row_limit=row_limit,
            extra_metadata=[e.metadata for e in manifest.sorted_entries()],
        )

    def metadata(self, ref: str) -> DatasetMetadata:
        try:
            return self.by_ref[ref]
        except KeyError:
            raise UnknownDataset(ref) from None

    def table(self, ref: str) -> RecordTable:
        if ref not in self._tables:
            meta = self.metadata(ref)
            self._tables[ref] = fetch_records(meta, self.source, limit=self.row_limit)
        return self._tables[ref]

    def tables_for(self, refs: Sequence[str]) -> dict[str, RecordTable]:
        return {r: self.table(r) for r in refs}


@dataclass(frozen=True)
class ParallelSetsModel:
    """Per-axis category frequencies plus adjacent-axis contingency ribbons."""

    axes: tuple[tuple[str, tuple[tuple[str, int], ...]], ...]
    ribbons: tuple[tuple[tuple[tuple[str, str], int], ...], ...]
    total: int

    def to_doc(self) -> dict:
        return {
            "axes": [
                {
                    "attr": attr,
                    "categories": [{"value": v, "count": c} for v, c in cats],
                }
                for attr, cats in self.axes
            ],
            "ribbons": [
                [
                    {"left": a, "right": b, "count": c}
                    for (a, b), c in ribbon
                ]
                for ribbon in self.ribbons
            ],
            "total": self.total,
        }


def parallel_sets_model(
    result: joins.JoinResult,
    axes: Sequence[str],
    max_categories: int = DEFAULT_MAX_CATEGORIES,
) -> ParallelSetsModel:
    """Frequency model of the joined records over the requested categorical axes.

    Categories beyond `max_categories` per axis (by descending count) merge
    into a single `⟨other⟩` bucket before ribbons are counted, so axis sums
    and ribbon sums always equal the joined-record total.
    """
    if not axes:
        raise ValueError("axes must be nonempty")
    if max_categories < 2:
        raise ValueError("max_categories must be >= 2")
    if not result.pair_indices:
        raise EmptyResult("parallel sets need at least one joined record")
    schema = dict(joins.joined_schema(result))
    for attr in axes:
        if attr not in schema:
            raise UnknownAttribute(attr)
    raw_columns: list[list[str]] = []
    for attr in axes:
        origin = schema[attr]
        raw_columns.append(
            [joins.joined_value(result, pair, attr, origin) for pair in result.pair_indices]
        )
    mapped_columns: list[list[str]] = []
    axis_docs = []
    for attr, values in zip(axes, raw_columns):
        counts = Counter(values)
        if len(counts) > max_categories:
            ordered = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
            keep = {v for v, _ in ordered[: max_categories - 1]}
            values = [v if v in keep else OTHER_BUCKET for v in values]
            counts = Counter(values)
        mapped_columns.append(values)
        cats = tuple(sorted(counts.items(), key=lambda kv: (-kv[1], kv[0])))
        axis_docs.append((attr, cats))
    ribbons = []
    for left_col, right_col in zip(mapped_columns, mapped_columns[1:]):
        pair_counts = Counter(zip(left_col, right_col))
        ribbons.append(tuple(sorted(pair_counts.items(), key=lambda kv: (-kv[1], kv[0]))))
    return ParallelSetsModel(
        axes=tuple(axis_docs), ribbons=tuple(ribbons), total=len(result.pair_indices)
    )


class DefenderSession:
    """Mutable state of one human triage workflow, with an append-only history."""

    def __init__(self, ctx: WorkflowContext, session_id: str | None = None):
        self.ctx = ctx
        self.session_id = session_id or uuid.uuid4().hex
        self.selected_qis: list[str] = []
        self.clusters: list[clustering.DatasetCluster] | None = None
        self.selected_cluster: clustering.DatasetCluster | None = None
        self.pairs: list[joins.PairRanking] | None = None
        self.selected_pair: tuple[str, str] | None = None
        self.join_result: joins.JoinResult | None = None
        self.join_score: joins.JoinabilityScore | None = None
        self.disclosures: list[joins.DisclosureCandidate] | None = None
        self.history: list[dict] = []
        self.outputs: dict[str, dict] = {}
        self._record("created", {})

    def _record(self, step: str, params: Mapping) -> None:
        self.history.append({"step": step, "at": _utc_now(), "params": dict(params)})


def create_session(ctx: WorkflowContext, session_id: str | None = None) -> DefenderSession:
    return DefenderSession(ctx, session_id=session_id)


def set_quasi_identifiers(session: DefenderSession, qis_or_profile) -> list[str]:
    """Store the defender's QI selection (list or "profile:NAME"); clears downstream state."""
    dictionary = session.ctx.dictionary
    if isinstance(qis_or_profile, str):
        name = qis_or_profile.removeprefix("profile:")
        if name not in dictionary.profiles:
            raise UnknownProfile(name)
        qis = list(dictionary.profile(name))
    else:
        qis = [normalize_attribute(q) for q in qis_or_profile]
        qis = [q for q in qis if q]
    if not qis:
        raise EmptySelection("no quasi-identifiers selected")
    session.selected_qis = qis
    session.clusters = None
    session.selected_cluster = None
    session.pairs = None
    session.selected_pair = None
    session.join_result = None
    session.join_score = None
    session.disclosures = None
    session.outputs = {}
    session._record("qis", {"qis": qis_or_profile if isinstance(qis_or_profile, str) else qis})
    return qis


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise StepOutOfOrder(message)


def _redacted(value: str, redact: bool) -> str:
    return redact_value(value) if redact else value


def _candidate_doc(
    candidate: joins.DisclosureCandidate, result: joins.JoinResult, redact: bool
) -> dict:
    left_row = [c.strip() for c in result.left_table.rows[candidate.left_index]]
    right_row = [c.strip() for c in result.right_table.rows[candidate.right_index]]
    return {
        "kind": candidate.kind,
        "key": [_redacted(v, redact) for v in candidate.key],
        "key_attrs": list(result.spec.key_attrs),
        "left_index": candidate.left_index,
        "right_index": candidate.right_index,
        "left_attrs": list(result.left_table.attribute_names),
        "right_attrs": list(result.right_table.attribute_names),
        "left_row": [_redacted(v, redact) for v in left_row],
        "right_row": [_redacted(v, redact) for v in right_row],
        "revealed_attrs": list(candidate.revealed_attrs),
    }


def run_step(session: DefenderSession, step: str, params: Mapping | None = None) -> dict:
    """Execute one workflow step, store its output, and append it to history."""
    params = dict(params or {})
    if step not in STEPS:
        raise ValueError(f"unknown step {step!r}; expected one of {STEPS}")
    ctx = session.ctx
    if step == "cluster":
        cut = float(params.get("cut", clustering.DEFAULT_DISTANCE_CUT))
        ranked = clustering.rank_clusters(
            clustering.cluster_datasets(ctx.collection, cut), session.selected_qis
        )
        session.clusters = ranked
        session.selected_cluster = None
        session.pairs = None
        session.selected_pair = None
        session.join_result = None
        session.join_score = None
        session.disclosures = None
        output = {"clusters": [c.to_doc() for c in ranked]}
    elif step == "pairs":
        _require(session.clusters is not None, "run the cluster step first")
        cluster_id = params.get("cluster")
        if cluster_id is None and session.clusters:
            cluster_id = session.clusters[0].cluster_id
        chosen = next(
            (c for c in session.clusters if c.cluster_id == cluster_id), None
        )
        if chosen is None:
            raise UnknownDataset(f"no cluster with id {cluster_id!r}")
        session.selected_cluster = chosen
        session.selected_pair = None
        session.join_result = None
        session.join_score = None
        session.disclosures = None
        tables = ctx.tables_for(chosen.members)
        session.pairs = joins.rank_pairs(chosen.members, tables, ctx.dictionary)
        output = {
            "cluster": chosen.cluster_id,
            "pair_count": joins.pair_count(len(chosen.members)),
            "pairs": [p.to_doc() for p in session.pairs],
        }
    elif step == "join":
        _require(session.pairs is not None, "run the pairs step first")
        left, right = params.get("left"), params.get("right")
        if left is None or right is None:
            if not session.pairs:
                raise StepOutOfOrder("no ranked pairs available")
            top = session.pairs[0]
            left, right = top.left_id, top.right_id
        left, right = min(left, right), max(left, right)
        ranking = next(
            (p for p in session.pairs if (p.left_id, p.right_id) == (left, right)), None
        )
        if ranking is None:
            raise UnknownDataset(f"pair ({left}, {right}) is not in the selected cluster")
        key = [normalize_attribute(k) for k in params.get("key", [])] or list(
            ranking.spec.key_attrs
        )
        spec = joins.JoinSpec(left_id=left, right_id=right, key_attrs=tuple(key))
        lt, rt = ctx.table(left), ctx.table(right)
        session.selected_pair = (left, right)
        session.join_result = joins.execute_join(lt, rt, spec)
        session.join_score = joins.joinability_risk(lt, rt, key)
        session.disclosures = None
        # match keys are record-level values; they leave the engine masked
        output = {
            "spec": spec.to_doc(),
            "score": session.join_score.to_doc(),
            "schema": [[attr, origin] for attr, origin in joins.joined_schema(session.join_result)],
            "matched_keys": len(session.join_result.matches),
            "joined_row_count": session.join_result.joined_row_count,
            "truncated": session.join_result.truncated,
            "matches": [
                {
                    "key": [redact_value(v) for v in k],
                    "left_rows": list(l),
                    "right_rows": list(r),
                }
                for k, (l, r) in session.join_result.matches.items()
            ],
        }
    elif step == "suggest":
        _require(session.join_result is not None, "run the join step first")
        result = session.join_result
        lt, rt = result.left_table, result.right_table
        shared = set(lt.attribute_names) & set(rt.attribute_names)
        unused = sorted(shared - set(result.spec.key_attrs))
        suggestions = joins.suggest_features(result, unused, lt, rt)
        output = {"suggestions": [s.to_doc() for s in suggestions]}
    elif step == "parallel_sets":
        _require(session.join_result is not None, "run the join step first")
        axes = [normalize_attribute(a) for a in params.get("axes", [])]
        if not axes:
            raise ValueError("parallel_sets needs at least one axis")
        model = parallel_sets_model(
            session.join_result,
            axes,
            max_categories=int(params.get("max_categories", DEFAULT_MAX_CATEGORIES)),
        )
        output = model.to_doc()
    else:  # disclosures
        _require(session.join_result is not None, "run the join step first")
        result = session.join_result
        left, right = session.selected_pair
        session.disclosures = joins.detect_disclosures(
            result, ctx.metadata(left), ctx.metadata(right), ctx.dictionary
        )
        output = {
            "identity_count": sum(1 for c in session.disclosures if c.kind == "identity"),
            "attribute_count": sum(1 for c in session.disclosures if c.kind == "attribute"),
            "candidates": [_candidate_doc(c, result, redact=True) for c in session.disclosures],
        }
    session.outputs[step] = output
    session._record(step, params)
    return output


def export_report(
    session: DefenderSession, redact: bool = True, acknowledged: bool = False
) -> dict:
    """JSON report of session parameters, scores, and disclosure candidates.

    Requires a completed disclosures step. `redact=False` demands the
    explicit acknowledgment gate. The document carries no wall-clock data,
    so identical parameters always produce identical bytes.
    """
    if session.disclosures is None:
        raise NothingToReport("run the disclosures step before exporting")
    if not redact and not acknowledged:
        raise RedactionNotAcknowledged("unredacted export requires acknowledgment")
    result = session.join_result
    report = {
        "schema": "riskcal-report/1",
        "redacted": redact,
        "collection_size": len(session.ctx.collection),
        "selected_qis": list(session.selected_qis),
        "steps": [
            {"step": h["step"], "params": h["params"]}
            for h in session.history
            if h["step"] != "created"
        ],
        "cluster": session.selected_cluster.to_doc() if session.selected_cluster else None,
        "pair": (
            {"left": session.selected_pair[0], "right": session.selected_pair[1]}
            if session.selected_pair
            else None
        ),
        "join": {
            "key": list(result.spec.key_attrs),
            "score": session.join_score.to_doc(),
            "matched_keys": len(result.matches),
            "joined_row_count": result.joined_row_count,
            "truncated": result.truncated,
        },
        "disclosures": {
            "identity_count": sum(1 for c in session.disclosures if c.kind == "identity"),
            "attribute_count": sum(1 for c in session.disclosures if c.kind == "attribute"),
            "candidates": [
                _candidate_doc(c, result, redact=redact) for c in session.disclosures
            ],
        },
    }
    return report


def session_doc(session: DefenderSession) -> dict:
    """Introspection document for GET /sessions/{id} and the CLI."""
    return {
        "session_id": session.session_id,
        "selected_qis": list(session.selected_qis),
        "selected_cluster": (
            session.selected_cluster.cluster_id if session.selected_cluster else None
        ),
        "selected_pair": list(session.selected_pair) if session.selected_pair else None,
        "steps_completed": sorted(session.outputs),
        "history": session.history,
    }


def save_history(session: DefenderSession, path: str | Path) -> None:
    lines = [json.dumps(h, sort_keys=True) for h in session.history]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_history(path: str | Path) -> list[dict]:
    rows = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line.strip():
            rows.append(json.loads(line))
    return rows


def replay_history(
    ctx: WorkflowContext, history: Sequence[Mapping]
) -> tuple[DefenderSession, list[tuple[str, bytes]]]:
    """Re-run recorded parameters against the context; returns output bytes per step."""
    session = create_session(ctx)
    outputs: list[tuple[str, bytes]] = []
    for row in history:
        step = row["step"]
        params = row.get("params", {})
        if step == "created":
            continue
        if step == "qis":
            set_quasi_identifiers(session, params["qis"])
            continue
        doc = run_step(session, step, params)
        outputs.append((step, canonical_json(doc)))
    return session, outputs


def dataset_risk_doc(
    ctx: WorkflowContext, ref: str, keys: Sequence[str] | str = "auto", threshold: int = 5
) -> dict:
    """Risk-metrics passthrough used by the scan CLI and the HTTP endpoint."""
    from . import metrics

    meta = ctx.metadata(ref)
    table = ctx.table(ref)
    if keys == "auto" or keys == ["auto"]:
        key_attrs = sorted(
            a.normalized_name
            for a in meta.attributes
            if ctx.dictionary.classify(a.normalized_name) is SemanticClass.QUASI_IDENTIFIER
        )
        if not key_attrs:
            raise EmptySelection(f"{ref} has no quasi-identifier attributes to scan")
    else:
        key_attrs = [normalize_attribute(k) for k in keys]
    sensitive = sorted(
        a.normalized_name
        for a in meta.attributes
        if ctx.dictionary.classify(a.normalized_name) is SemanticClass.SENSITIVE
    )
    summary = metrics.risk_summary(table, key_attrs, sensitive)
    findings = metrics.vulnerable_entry_points(table, key_attrs, threshold)
    return {
        "dataset": ref,
        "keys": list(key_attrs),
        "summary": summary.to_doc(),
        "entry_points": [f.to_doc() for f in findings],
        "entropy": {a: metrics.attribute_entropy(table, a) for a in key_attrs},
    }
