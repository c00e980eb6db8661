import random

import pytest

from riskcal import workflow
from riskcal.errors import (
    EmptyResult,
    EmptySelection,
    NothingToReport,
    RedactionNotAcknowledged,
    StepOutOfOrder,
    UnknownAttribute,
    UnknownCollection,
    UnknownProfile,
)
from riskcal.joins import JoinSpec, execute_join
from riskcal.workflow import (
    WorkflowContext,
    canonical_json,
    create_session,
    export_report,
    parallel_sets_model,
    redact_value,
    replay_history,
    run_step,
    set_quasi_identifiers,
)

from helpers import make_table, police_walkthrough, random_table


@pytest.fixture()
def session(ctx):
    return create_session(ctx)


class TestSessionLifecycle:
    def test_fresh_session_history(self, session):
        assert [h["step"] for h in session.history] == ["created"]
        assert session.selected_qis == []

    def test_distinct_ids(self, ctx):
        assert create_session(ctx).session_id != create_session(ctx).session_id

    def test_missing_manifest_is_unknown_collection(self, corpus_path, dictionary, tmp_path):
        with pytest.raises(UnknownCollection):
            WorkflowContext.from_paths(tmp_path / "nope.jsonl", corpus_path, dictionary)


class TestSetQuasiIdentifiers:
    def test_police_profile_stores_six(self, session):
        qis = set_quasi_identifiers(session, "profile:police")
        assert len(qis) == 6
        assert "victim age" in qis

    def test_explicit_list_normalized(self, session):
        assert set_quasi_identifiers(session, ["Age", "SEX"]) == ["age", "sex"]

    def test_empty_selection(self, session):
        with pytest.raises(EmptySelection):
            set_quasi_identifiers(session, [])

    def test_unknown_profile(self, session):
        with pytest.raises(UnknownProfile):
            set_quasi_identifiers(session, "profile:meteorology")

    def test_invalidates_downstream(self, session):
        police_walkthrough(session)
        assert session.join_result is not None
        set_quasi_identifiers(session, ["age"])
        assert session.clusters is None and session.join_result is None


class TestStepOrdering:
    def test_pairs_before_cluster(self, session):
        with pytest.raises(StepOutOfOrder):
            run_step(session, "pairs", {})

    def test_join_before_pairs(self, session):
        set_quasi_identifiers(session, "profile:police")
        run_step(session, "cluster", {})
        with pytest.raises(StepOutOfOrder):
            run_step(session, "join", {})

    @pytest.mark.parametrize("step", ["suggest", "parallel_sets", "disclosures"])
    def test_analysis_steps_need_join(self, session, step):
        set_quasi_identifiers(session, "profile:police")
        run_step(session, "cluster", {})
        run_step(session, "pairs", {})
        with pytest.raises(StepOutOfOrder):
            run_step(session, step, {"axes": ["victim race"]})

    def test_unknown_step_rejected(self, session):
        with pytest.raises(ValueError):
            run_step(session, "teleport", {})

    def test_new_cluster_selection_clears_join_state(self, session):
        police_walkthrough(session)
        second_cluster = session.clusters[1].cluster_id
        run_step(session, "pairs", {"cluster": second_cluster})
        assert session.join_result is None
        with pytest.raises(StepOutOfOrder):
            run_step(session, "disclosures", {})


class TestWalkthroughSteps:
    def test_first_cluster_of_eight_gives_28_pairs(self, session):
        set_quasi_identifiers(session, "profile:police")
        clusters = run_step(session, "cluster", {})["clusters"]
        assert len(clusters[0]["members"]) == 8
        pairs_output = run_step(session, "pairs", {})
        assert pairs_output["pair_count"] == 28
        assert len(pairs_output["pairs"]) == 28

    def test_join_defaults_to_top_pair(self, session):
        set_quasi_identifiers(session, "profile:police")
        run_step(session, "cluster", {})
        pairs_output = run_step(session, "pairs", {})
        join_output = run_step(session, "join", {})
        top = pairs_output["pairs"][0]
        assert join_output["spec"]["left"] == top["left"]
        assert join_output["spec"]["right"] == top["right"]
        assert join_output["matched_keys"] == 24
        assert join_output["joined_row_count"] == 30

    def test_parallel_sets_axis_sums_match_total(self, session):
        outputs = police_walkthrough(session)
        model = outputs["parallel_sets"]
        for axis in model["axes"]:
            assert sum(c["count"] for c in axis["categories"]) == model["total"]
        for ribbon in model["ribbons"]:
            assert sum(r["count"] for r in ribbon) == model["total"]

    def test_disposition_transition_is_singleton(self, session):
        outputs = police_walkthrough(session)
        dispo_axis = outputs["parallel_sets"]["axes"][2]
        assert dispo_axis["attr"] == "disposition"
        counts = {c["value"]: c["count"] for c in dispo_axis["categories"]}
        assert counts["open→closed"] == 1

    def test_disclosures_step_redacts_values(self, session):
        outputs = police_walkthrough(session)
        candidates = outputs["disclosures"]["candidates"]
        assert outputs["disclosures"]["identity_count"] == 20
        runaway = [
            c for c in candidates
            if c["kind"] == "identity" and c["key"][0].startswith("8")
        ]
        assert any("X" in cell for c in runaway for cell in c["key"])

    def test_suggest_step_runs_after_join(self, session):
        set_quasi_identifiers(session, "profile:police")
        run_step(session, "cluster", {})
        run_step(session, "pairs", {})
        run_step(session, "join", {})
        suggestions = run_step(session, "suggest", {})["suggestions"]
        assert suggestions
        gains = [s["separation_gain"] for s in suggestions if not s["overconstraining"]]
        assert gains == sorted(gains, reverse=True)


class TestParallelSetsModel:
    def test_single_joined_row_single_unit_ribbon(self):
        a = make_table({"k": ["x"], "left attr": ["p"]})
        b = make_table({"k": ["x"], "right attr": ["q"]})
        result = execute_join(a, b, JoinSpec("a", "b", ("k",)))
        model = parallel_sets_model(result, ["left attr", "right attr"])
        assert model.total == 1
        assert model.ribbons[0] == ((("p", "q"), 1),)

    def test_unknown_axis(self):
        a = make_table({"k": ["x"]})
        result = execute_join(a, a, JoinSpec("a", "a", ("k",)))
        with pytest.raises(UnknownAttribute):
            parallel_sets_model(result, ["ghost"])

    def test_empty_result_rejected(self):
        a = make_table({"k": ["x"]})
        b = make_table({"k": ["y"]})
        result = execute_join(a, b, JoinSpec("a", "b", ("k",)))
        with pytest.raises(EmptyResult):
            parallel_sets_model(result, ["k"])

    def test_bucketing_caps_categories(self):
        n = 40
        a = make_table({"k": [str(i) for i in range(n)], "v": [f"c{i}" for i in range(n)]})
        model = parallel_sets_model(
            execute_join(a, a, JoinSpec("a", "a", ("k",))), ["v"], max_categories=5
        )
        values = [v for v, _ in model.axes[0][1]]
        assert len(values) == 5
        assert "⟨other⟩" in values
        assert sum(c for _, c in model.axes[0][1]) == n

    def test_conservation_on_random_joins(self):
        rng = random.Random(83)
        for _ in range(30):
            a = random_table(rng, max_rows=40, max_attrs=3, alphabet_size=3)
            b_cols = {
                name: [rng.choice(["v0", "v1", "v2"]) for _ in range(30)]
                for name in a.attribute_names
            }
            b = make_table(b_cols)
            key = (a.attribute_names[0],)
            result = execute_join(a, b, JoinSpec("a", "b", key))
            if not result.pair_indices:
                continue
            axes = list(a.attribute_names)[: rng.randint(1, len(a.attribute_names))]
            model = parallel_sets_model(result, axes, max_categories=rng.choice([2, 3, 12]))
            for _, cats in model.axes:
                assert sum(c for _, c in cats) == model.total
            for ribbon in model.ribbons:
                assert sum(c for _, c in ribbon) == model.total


class TestRedaction:
    @pytest.mark.parametrize(
        "value,expected",
        [
            ("Hawaiian", "HXXXXXXX"),
            ("F", "F"),
            ("", ""),
            ("28", "2X"),
            ("2018-03-10", "2018-03"),
            ("2016-12-05T10:00:00", "2016-12"),
            ("85XX Dinkins St", "8XXXXXXXXXXXXXX"),
        ],
    )
    def test_mask_rules(self, value, expected):
        assert redact_value(value) == expected


class TestExportReport:
    def test_report_requires_disclosures(self, session):
        with pytest.raises(NothingToReport):
            export_report(session)

    def test_redacted_report_masks_values_keeps_counts(self, session):
        police_walkthrough(session)
        report = export_report(session, redact=True)
        assert report["disclosures"]["identity_count"] == 20
        runaway = [
            c for c in report["disclosures"]["candidates"]
            if c["kind"] == "identity" and c["key"][0].startswith("8")
        ][0]
        assert runaway["key"][0] == "8XXXXXXXXXXXXXX"

    def test_unredacted_requires_acknowledgment(self, session):
        police_walkthrough(session)
        with pytest.raises(RedactionNotAcknowledged):
            export_report(session, redact=False)
        report = export_report(session, redact=False, acknowledged=True)
        raw = [
            c for c in report["disclosures"]["candidates"]
            if c["kind"] == "identity" and c["key"][0] == "85XX Dinkins St"
        ]
        assert raw

    def test_report_has_no_timestamps(self, session):
        police_walkthrough(session)
        report = export_report(session)
        assert '"at":' not in canonical_json(report).decode()  # history timestamps excluded
        for step in report["steps"]:
            assert set(step) == {"step", "params"}


class TestReplay:
    def test_byte_identical_outputs_and_report(self, ctx, session):
        police_walkthrough(session)
        original_outputs = [
            (h["step"], canonical_json(session.outputs[h["step"]]))
            for h in session.history
            if h["step"] in workflow.STEPS
        ]
        original_report = canonical_json(export_report(session, redact=True))
        replayed_session, replayed_outputs = replay_history(ctx, session.history)
        assert replayed_outputs == original_outputs
        assert canonical_json(export_report(replayed_session, redact=True)) == original_report

    def test_replay_from_saved_file(self, ctx, session, tmp_path):
        police_walkthrough(session)
        path = tmp_path / "history.jsonl"
        workflow.save_history(session, path)
        _, outputs = replay_history(ctx, workflow.load_history(path))
        assert len(outputs) == 5


class TestDatasetRisk:
    def test_auto_keys_pick_qis(self, ctx):
        doc = workflow.dataset_risk_doc(ctx, "san-mateo.example:smc-wpc-demographics-2")
        assert doc["keys"] == ["age", "city", "language", "race", "sex"]
        assert doc["summary"]["k"] >= 1

    def test_explicit_keys(self, ctx):
        doc = workflow.dataset_risk_doc(
            ctx, "san-mateo.example:smc-wpc-demographics-2", ["age", "race", "sex"], threshold=1
        )
        assert doc["summary"]["k"] == 1
        assert [tuple(f["key"]) for f in doc["entry_points"]] == [("28", "hawaiian", "F")]
