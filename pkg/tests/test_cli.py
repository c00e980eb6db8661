import json

import pytest
from click.testing import CliRunner

from riskcal import workflow
from riskcal.cli import main
from riskcal.workflow import canonical_json, create_session, export_report

from helpers import police_walkthrough


@pytest.fixture()
def runner():
    return CliRunner()


@pytest.fixture(scope="module")
def workdir(tmp_path_factory, corpus_path):
    """Manifest built through the CLI itself, labels applied from the corpus."""
    root = tmp_path_factory.mktemp("cli")
    manifest = root / "collection.jsonl"
    runner = CliRunner()
    result = runner.invoke(main, [
        "harvest", "--source", str(corpus_path), "--manifest", str(manifest),
    ])
    assert result.exit_code == 0, result.output
    result = runner.invoke(main, [
        "curate", "--manifest", str(manifest),
        "--labels", str(corpus_path / "labels.json"),
    ])
    assert result.exit_code == 0, result.output
    return root


def wf_args(workdir, corpus_path):
    return [
        "--manifest", str(workdir / "collection.jsonl"), "--fixtures", str(corpus_path),
    ]


class TestHarvestAndCurate:
    def test_harvest_reports_counts(self, runner, corpus_path, tmp_path):
        manifest = tmp_path / "collection.jsonl"
        result = runner.invoke(main, [
            "harvest", "--source", str(corpus_path), "--manifest", str(manifest),
        ])
        assert result.exit_code == 0
        assert "portals: 12" in result.output
        assert "resources: 60" in result.output
        assert manifest.exists() and (tmp_path / "funnel.json").exists()

    def test_harvest_caches_tables(self, runner, corpus_path, tmp_path):
        result = runner.invoke(main, [
            "harvest", "--source", str(corpus_path),
            "--cache-dir", str(tmp_path / "cache"), "--limit", "5",
        ])
        assert result.exit_code == 0
        assert "cached tables: 18" in result.output
        assert len(list((tmp_path / "cache").glob("*.json"))) == 18

    def test_curate_prints_funnel(self, runner, corpus_path, tmp_path):
        manifest = tmp_path / "collection.jsonl"
        runner.invoke(main, ["harvest", "--source", str(corpus_path), "--manifest", str(manifest)])
        result = runner.invoke(main, [
            "curate", "--manifest", str(manifest),
            "--labels", str(corpus_path / "labels.json"),
        ])
        assert result.exit_code == 0
        assert "60 → 41 → 18 → 11 (6/5)" in result.output

    def test_interactive_curation_prompts(self, runner, corpus_path, tmp_path):
        manifest = tmp_path / "collection.jsonl"
        runner.invoke(main, ["harvest", "--source", str(corpus_path), "--manifest", str(manifest)])
        # label the first undecided entry human-subject, skip the rest
        responses = ["human-subject", "individual-record", "spot check"] + ["undecided"] * 17
        result = runner.invoke(
            main, ["curate", "--manifest", str(manifest)], input="\n".join(responses) + "\n"
        )
        assert result.exit_code == 0, result.output
        assert "→ 1 (1/0)" in result.output


class TestFunnelCommand:
    def test_json_matches_committed(self, runner, workdir, corpus_path):
        result = runner.invoke(main, [
            "funnel", "--manifest", str(workdir / "collection.jsonl"), "--format", "json",
        ])
        assert result.exit_code == 0
        expected = (corpus_path / "expected" / "funnel.json").read_text()
        assert result.output == expected

    def test_review_rejected_lists_entries(self, runner, workdir, corpus_path):
        result = runner.invoke(main, [
            "funnel", "--manifest", str(workdir / "collection.jsonl"), "--review-rejected",
        ])
        assert result.exit_code == 0
        assert "rejected [non-human] metro-city.example:met-building-details" in result.output
        assert "rejected [undecided] albany.example:alb-arrests-zone" in result.output


class TestScanCommand:
    def test_scan_finds_singleton(self, runner, corpus_path):
        result = runner.invoke(main, [
            "scan", "san-mateo.example:smc-wpc-demographics-2",
            "--source", str(corpus_path), "--keys", "age,race,sex", "--threshold", "1",
        ])
        assert result.exit_code == 0, result.output
        doc = json.loads(result.output)
        assert doc["summary"]["k"] == 1
        assert [f["key"] for f in doc["entry_points"]] == [["28", "hawaiian", "F"]]

    def test_scan_unknown_dataset(self, runner, corpus_path):
        result = runner.invoke(main, [
            "scan", "san-mateo.example:nope", "--source", str(corpus_path),
        ])
        assert result.exit_code != 0

    def test_scan_whole_collection(self, runner, workdir, corpus_path):
        result = runner.invoke(main, [
            "scan", str(workdir / "collection.jsonl"),
            "--source", str(corpus_path), "--threshold", "1",
        ])
        assert result.exit_code == 0, result.output
        doc = json.loads(result.output)
        assert len(doc["datasets"]) == 11
        wpc = next(
            d for d in doc["datasets"]
            if d["dataset"] == "san-mateo.example:smc-wpc-demographics-2"
        )
        assert wpc["summary"]["k"] == 1


class TestClusterAndPairs:
    def test_cluster_ranked_by_profile(self, runner, workdir, corpus_path):
        result = runner.invoke(main, [
            "cluster", *wf_args(workdir, corpus_path), "--qis", "profile:police",
        ])
        assert result.exit_code == 0, result.output
        doc = json.loads(result.output)
        assert len(doc["clusters"][0]["members"]) == 8
        assert doc["clusters"][0]["rank_score"]["qi_overlap"] == 6

    def test_pairs_default_cluster(self, runner, workdir, corpus_path):
        result = runner.invoke(main, [
            "pairs", *wf_args(workdir, corpus_path), "--qis", "profile:police",
        ])
        assert result.exit_code == 0, result.output
        doc = json.loads(result.output)
        assert doc["pair_count"] == 28
        assert doc["pairs"][0]["left"].endswith("nopd-epr-2015")


class TestJoinCommand:
    def test_join_emits_candidates(self, runner, workdir, corpus_path):
        result = runner.invoke(main, [
            "join", *wf_args(workdir, corpus_path),
            "--left", "ft-laud.example:ftl-adult-arrests",
            "--right", "ft-laud.example:ftl-juvenile-arrests",
            "--key", "case id",
        ])
        assert result.exit_code == 0, result.output
        doc = json.loads(result.output)
        kinds = [c["kind"] for c in doc["candidates"]]
        assert kinds.count("identity") == 2
        assert all("X" in c["key"][0] for c in doc["candidates"])  # redacted by default

    def test_join_outside_collection_uses_manifest(self, runner, workdir, corpus_path):
        result = runner.invoke(main, [
            "join", *wf_args(workdir, corpus_path),
            "--left", "albany.example:alb-arrests-nbhd",
            "--right", "albany.example:alb-interviews-nbhd",
            "--key", "age,race,sex,neighborhoodxy",
        ])
        assert result.exit_code == 0, result.output
        doc = json.loads(result.output)
        assert any(c["kind"] == "attribute" for c in doc["candidates"])

    def test_text_format(self, runner, workdir, corpus_path):
        result = runner.invoke(main, [
            "join", *wf_args(workdir, corpus_path),
            "--left", "ft-laud.example:ftl-adult-arrests",
            "--right", "ft-laud.example:ftl-juvenile-arrests",
            "--key", "case id", "--format", "text",
        ])
        assert result.exit_code == 0, result.output
        assert "2 matched keys" in result.output
        assert "[identity]" in result.output

    def test_no_redact_requires_acknowledgment(self, runner, workdir, corpus_path):
        args = [
            "join", *wf_args(workdir, corpus_path),
            "--left", "ft-laud.example:ftl-adult-arrests",
            "--right", "ft-laud.example:ftl-juvenile-arrests",
            "--key", "case id", "--no-redact",
        ]
        denied = runner.invoke(main, args)
        assert denied.exit_code != 0
        allowed = runner.invoke(main, args + ["--i-understand-risk"])
        assert allowed.exit_code == 0
        doc = json.loads(allowed.output)
        assert doc["candidates"][0]["key"] == ["FTL-2018-0310"]


class TestTransitiveCommand:
    def test_corpus_has_no_qualifying_bridge(self, runner, workdir, corpus_path):
        result = runner.invoke(main, [
            "transitive", *wf_args(workdir, corpus_path), "--min-risk", "0.2",
        ])
        assert result.exit_code == 0, result.output
        assert json.loads(result.output) == {"candidates": []}


class TestSessionReplayCommand:
    def test_replay_report_matches_engine(self, runner, workdir, corpus_path, ctx, tmp_path):
        session = create_session(ctx)
        police_walkthrough(session)
        history = tmp_path / "history.jsonl"
        workflow.save_history(session, history)
        report_path = tmp_path / "report.json"
        result = runner.invoke(main, [
            "session", "replay", str(history), *wf_args(workdir, corpus_path),
            "--report", str(report_path),
            "--outputs-dir", str(tmp_path / "outputs"),
        ])
        assert result.exit_code == 0, result.output
        assert report_path.read_bytes() == canonical_json(export_report(session, redact=True))
        assert len(list((tmp_path / "outputs").glob("*.json"))) == 5
