"""Command-line interface for the disclosure-risk calibration workbench."""

from __future__ import annotations

import json
import sys
from datetime import datetime, timezone
from pathlib import Path

import click

from . import catalog, clustering, curation, joins, metrics, workflow
from .errors import RiskcalError
from .qi import SemanticClass, load_default_dictionary, normalize_attribute
from .workflow import WorkflowContext, canonical_json


def _echo_doc(doc, fmt: str = "json") -> None:
    if fmt == "json":
        click.echo(canonical_json(doc).decode("utf-8"))
    else:
        click.echo(json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False))


def _load_dictionary(path: str | None):
    return load_default_dictionary(path)


qi_dict_option = click.option(
    "--qi-dict", default=None, help="Dictionary/config JSON (overrides RISKCAL_QI_DICT)."
)


@click.group()
def main() -> None:
    """Harvest open-data catalogs, score re-identification risk, triage joins."""


@main.command()
@click.option("--source", required=True, help="Discovery endpoint URL or fixture directory.")
@click.option("--cache-dir", default=None, help="Row cache root; one file per cache key.")
@click.option("--refresh", is_flag=True, help="Refetch rows even when cached.")
@click.option("--limit", type=int, default=None, help="Max rows fetched per dataset.")
@click.option("--no-row-cap", is_flag=True, help="Lift the 50,000-row safety cap.")
@click.option("--manifest", "manifest_path", default=None, help="Write collection.jsonl here.")
@click.option("--min-qi", type=int, default=curation.DEFAULT_MIN_QI, show_default=True)
@qi_dict_option
def harvest(source, cache_dir, refresh, limit, no_row_cap, manifest_path, min_qi, qi_dict) -> None:
    """Discover portals and harvest dataset metadata (and optionally rows)."""
    dictionary = _load_dictionary(qi_dict)
    portals = catalog.discover_portals(source)
    all_metadata = []
    for portal in portals:
        all_metadata.extend(catalog.harvest_metadata(portal, source, dictionary))
    click.echo(f"portals: {len(portals)}  resources: {len(all_metadata)}")
    manifest = curation.build_manifest(all_metadata, dictionary, min_qi=min_qi)
    if cache_dir:
        store = catalog.CacheStore(cache_dir)
        cached = 0
        row_cap = None if no_row_cap else catalog.DEFAULT_ROW_CAP
        for entry in manifest.sorted_entries():
            catalog.fetch_records_cached(
                entry.metadata, source, store, limit=limit, row_cap=row_cap, refresh=refresh
            )
            cached += 1
        click.echo(f"cached tables: {cached}")
    if manifest_path:
        curation.save_manifest(manifest, manifest_path)
        click.echo(f"manifest: {manifest_path} ({len(manifest.entries)} qi-filtered entries)")


@main.command()
@click.option("--manifest", "manifest_path", required=True)
@click.option("--labels", "labels_path", default=None, help="Apply a labels JSON file.")
def curate(manifest_path, labels_path) -> None:
    """Label qi-filtered datasets as human-subject or not (interactive or from file)."""
    manifest = curation.load_manifest(manifest_path)
    if labels_path:
        manifest = curation.apply_labels_file(manifest, labels_path)
    else:
        for entry in manifest.sorted_entries():
            if entry.label.relevance is not curation.Relevance.UNDECIDED:
                continue
            meta = entry.metadata
            click.echo(f"\n{meta.ref}: {meta.title}")
            click.echo(f"  attributes: {', '.join(meta.attribute_names)}")
            click.echo(f"  qi hits: {', '.join(entry.qi_hits)}")
            relevance = click.prompt(
                "  relevance",
                type=click.Choice([r.value for r in curation.Relevance]),
                default=curation.Relevance.UNDECIDED.value,
            )
            if relevance == curation.Relevance.UNDECIDED.value:
                continue
            granularity = curation.Granularity.UNKNOWN.value
            if relevance == curation.Relevance.HUMAN_SUBJECT.value:
                granularity = click.prompt(
                    "  granularity",
                    type=click.Choice(
                        [curation.Granularity.INDIVIDUAL.value, curation.Granularity.AGGREGATE.value]
                    ),
                )
            note = click.prompt("  note", default="", show_default=False) or None
            label = curation.CurationLabel(
                relevance=curation.Relevance(relevance),
                granularity=curation.Granularity(granularity),
                note=note,
                labeled_at=datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ"),
            )
            manifest = curation.label_dataset(manifest, meta.portal, meta.dataset_id, label)
    _, manifest = curation.build_collection(manifest)
    curation.save_manifest(manifest, manifest_path)
    report = curation.funnel_report(manifest)
    click.echo(report.render_text())


@main.command()
@click.option("--manifest", "manifest_path", required=True)
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="text")
@click.option("--review-rejected", is_flag=True, help="List qi-filtered entries left out.")
def funnel(manifest_path, fmt, review_rejected) -> None:
    """Report the curation funnel stage counts."""
    manifest = curation.load_manifest(manifest_path)
    _, manifest = curation.build_collection(manifest)
    report = curation.funnel_report(manifest)
    if fmt == "json":
        click.echo(curation.funnel_json_bytes(report).decode("utf-8"), nl=False)
    else:
        click.echo(report.render_text())
    if review_rejected:
        for entry in curation.rejected_entries(manifest):
            click.echo(
                f"  rejected [{entry.label.relevance.value}] "
                f"{entry.metadata.ref}: {entry.metadata.title}"
            )


def _scan_one(meta, source, dictionary, keys, threshold, subsets) -> dict:
    table = catalog.fetch_records(meta, source)
    if keys == "auto":
        key_attrs = sorted(
            a.normalized_name
            for a in meta.attributes
            if dictionary.classify(a.normalized_name) is SemanticClass.QUASI_IDENTIFIER
        )
    else:
        key_attrs = [normalize_attribute(k) for k in keys.split(",") if k.strip()]
    if not key_attrs:
        raise click.ClickException(f"no key attributes to scan in {meta.ref}")
    sensitive = sorted(
        a.normalized_name
        for a in meta.attributes
        if dictionary.classify(a.normalized_name) is SemanticClass.SENSITIVE
    )
    return {
        "dataset": meta.ref,
        "keys": key_attrs,
        "summary": metrics.risk_summary(table, key_attrs, sensitive).to_doc(),
        "entry_points": [
            f.to_doc()
            for f in metrics.vulnerable_entry_points(table, key_attrs, threshold, subsets)
        ],
    }


def _echo_scan_text(doc) -> None:
    click.echo(f"{doc['dataset']}: k={doc['summary']['k']} over {', '.join(doc['keys'])}")
    for f in doc["entry_points"]:
        click.echo(f"  size {f['class_size']}: {tuple(f['key'])} over {tuple(f['key_attrs'])}")


@main.command()
@click.argument("target")
@click.option("--source", required=True, help="Discovery endpoint URL or fixture directory.")
@click.option("--keys", default="auto", help="Comma-separated key attrs, or `auto`.")
@click.option("--threshold", type=int, default=5, show_default=True)
@click.option("--subsets", is_flag=True, help="Scan every nonempty subset of the key.")
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="json")
@qi_dict_option
def scan(target, source, keys, threshold, subsets, fmt, qi_dict) -> None:
    """Scan a dataset (`portal:dataset_id`) or a whole collection manifest."""
    dictionary = _load_dictionary(qi_dict)
    if Path(target).is_file():
        manifest = curation.load_manifest(target)
        selected, _ = curation.build_collection(manifest)
        docs = [_scan_one(m, source, dictionary, keys, threshold, subsets) for m in selected]
        if fmt == "json":
            _echo_doc({"datasets": docs})
        else:
            for doc in docs:
                _echo_scan_text(doc)
        return
    portal_domain, _, dataset_id = target.partition(":")
    portals = {p.domain: p for p in catalog.discover_portals(source)}
    if portal_domain not in portals:
        raise click.ClickException(f"unknown portal {portal_domain!r}")
    harvested = catalog.harvest_metadata(portals[portal_domain], source, dictionary)
    meta = next((m for m in harvested if m.dataset_id == dataset_id), None)
    if meta is None:
        raise click.ClickException(f"unknown dataset {target!r}")
    doc = _scan_one(meta, source, dictionary, keys, threshold, subsets)
    if fmt == "json":
        _echo_doc(doc)
    else:
        _echo_scan_text(doc)


def _resolve_qis(ctx: WorkflowContext, qis: str) -> list[str]:
    if qis.startswith("profile:"):
        return list(ctx.dictionary.profile(qis.removeprefix("profile:")))
    return [normalize_attribute(q) for q in qis.split(",") if q.strip()]


workflow_options = [
    click.option("--manifest", "manifest_path", required=True),
    click.option("--fixtures", "fixtures_path", required=True, help="Source dir or URL."),
    qi_dict_option,
]


def _with_options(options):
    def wrap(fn):
        for option in reversed(options):
            fn = option(fn)
        return fn

    return wrap


@main.command()
@_with_options(workflow_options)
@click.option("--qis", default="", help="Comma list of QIs or profile:NAME.")
@click.option("--cut", type=float, default=clustering.DEFAULT_DISTANCE_CUT, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="json")
def cluster(manifest_path, fixtures_path, qi_dict, qis, cut, fmt) -> None:
    """Cluster the curated collection and rank by selected quasi-identifiers."""
    ctx = WorkflowContext.from_paths(manifest_path, fixtures_path, _load_dictionary(qi_dict))
    selected = _resolve_qis(ctx, qis) if qis else []
    ranked = clustering.rank_clusters(clustering.cluster_datasets(ctx.collection, cut), selected)
    doc = {"clusters": [c.to_doc() for c in ranked]}
    if fmt == "json":
        _echo_doc(doc)
    else:
        for c in doc["clusters"]:
            score = c["rank_score"]
            click.echo(
                f"[qi={score['qi_overlap']} size={score['size']}] {', '.join(c['members'])}"
            )


@main.command()
@_with_options(workflow_options)
@click.option("--qis", default="", help="Comma list of QIs or profile:NAME.")
@click.option("--cut", type=float, default=clustering.DEFAULT_DISTANCE_CUT, show_default=True)
@click.option("--cluster", "cluster_id", default=None, help="Cluster id; default top-ranked.")
def pairs(manifest_path, fixtures_path, qi_dict, qis, cut, cluster_id) -> None:
    """Rank the pairwise join candidates inside one cluster."""
    ctx = WorkflowContext.from_paths(manifest_path, fixtures_path, _load_dictionary(qi_dict))
    session = workflow.create_session(ctx)
    if qis:
        workflow.set_quasi_identifiers(session, _resolve_qis(ctx, qis))
    workflow.run_step(session, "cluster", {"cut": cut})
    params = {} if cluster_id is None else {"cluster": cluster_id}
    _echo_doc(workflow.run_step(session, "pairs", params))


@main.command()
@_with_options(workflow_options)
@click.option("--left", required=True)
@click.option("--right", required=True)
@click.option("--key", required=True, help="Comma-separated join key attributes.")
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="json")
@click.option("--redact/--no-redact", default=True, show_default=True)
@click.option("--i-understand-risk", "acknowledged", is_flag=True)
def join(manifest_path, fixtures_path, qi_dict, left, right, key, fmt, redact, acknowledged) -> None:
    """Execute an equality join and report disclosure candidates."""
    from .errors import RedactionNotAcknowledged

    if not redact and not acknowledged:
        raise RedactionNotAcknowledged("--no-redact requires --i-understand-risk")
    ctx = WorkflowContext.from_paths(manifest_path, fixtures_path, _load_dictionary(qi_dict))
    key_attrs = tuple(normalize_attribute(k) for k in key.split(",") if k.strip())
    spec = joins.JoinSpec(left_id=left, right_id=right, key_attrs=key_attrs)
    lt, rt = ctx.table(left), ctx.table(right)
    result = joins.execute_join(lt, rt, spec)
    candidates = joins.detect_disclosures(
        result, ctx.metadata(left), ctx.metadata(right), ctx.dictionary
    )
    score = joins.joinability_risk(lt, rt, key_attrs)
    doc = {
        "spec": spec.to_doc(),
        "score": score.to_doc(),
        "matched_keys": len(result.matches),
        "joined_row_count": result.joined_row_count,
        "truncated": result.truncated,
        "candidates": [workflow._candidate_doc(c, result, redact=redact) for c in candidates],
    }
    if fmt == "json":
        _echo_doc(doc)
    else:
        click.echo(
            f"{left} × {right} on [{', '.join(key_attrs)}]: risk {score.risk:.3f}, "
            f"{len(result.matches)} matched keys, {result.joined_row_count} joined rows"
        )
        for c in doc["candidates"]:
            revealed = f" reveals {', '.join(c['revealed_attrs'])}" if c["revealed_attrs"] else ""
            click.echo(f"  [{c['kind']}] {tuple(c['key'])}{revealed}")


@main.command()
@_with_options(workflow_options)
@click.option("--min-risk", type=float, default=0.2, show_default=True)
def transitive(manifest_path, fixtures_path, qi_dict, min_risk) -> None:
    """Enumerate transitive-join candidates across the curated collection."""
    ctx = WorkflowContext.from_paths(manifest_path, fixtures_path, _load_dictionary(qi_dict))
    tables = ctx.tables_for([m.ref for m in ctx.collection])
    found = joins.transitive_candidates(ctx.collection, tables, ctx.dictionary, min_risk)
    _echo_doc({"candidates": [c.to_doc() for c in found]})


@main.command()
@_with_options(workflow_options)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8400, show_default=True)
@click.option("--ui", "ui_dir", default=None, help="Static UI bundle to serve at /.")
@click.option("--session-dir", default=None, help="Persist session histories here.")
def serve(manifest_path, fixtures_path, qi_dict, host, port, ui_dir, session_dir) -> None:
    """Run the workflow HTTP service."""
    import uvicorn

    from .server import create_app, mount_ui

    ctx = WorkflowContext.from_paths(manifest_path, fixtures_path, _load_dictionary(qi_dict))
    app = create_app(ctx, session_dir=session_dir)
    if ui_dir:
        mount_ui(app, ui_dir)
    uvicorn.run(app, host=host, port=port, log_level="warning")


@main.group()
def session() -> None:
    """Session tooling."""


@session.command()
@click.argument("history_file")
@_with_options(workflow_options)
@click.option("--report", "report_path", default=None, help="Write the report JSON here.")
@click.option("--outputs-dir", default=None, help="Write per-step output JSON here.")
@click.option("--redact/--no-redact", default=True, show_default=True)
@click.option("--i-understand-risk", "acknowledged", is_flag=True)
def replay(
    history_file, manifest_path, fixtures_path, qi_dict, report_path, outputs_dir, redact, acknowledged
) -> None:
    """Re-run a recorded session history and export its report."""
    ctx = WorkflowContext.from_paths(manifest_path, fixtures_path, _load_dictionary(qi_dict))
    history = workflow.load_history(history_file)
    replayed, outputs = workflow.replay_history(ctx, history)
    if outputs_dir:
        out_root = Path(outputs_dir)
        out_root.mkdir(parents=True, exist_ok=True)
        for i, (step, payload) in enumerate(outputs):
            (out_root / f"{i:02d}-{step}.json").write_bytes(payload)
    report = workflow.export_report(replayed, redact=redact, acknowledged=acknowledged)
    payload = canonical_json(report)
    if report_path:
        Path(report_path).write_bytes(payload)
    else:
        click.echo(payload.decode("utf-8"))


def entrypoint() -> None:
    try:
        main(standalone_mode=True)
    except RiskcalError as exc:
        click.echo(f"error [{exc.code}]: {exc}", err=True)
        sys.exit(2)


if __name__ == "__main__":
    entrypoint()
