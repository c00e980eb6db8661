import pytest
from fastapi.testclient import TestClient

from riskcal import workflow
from riskcal.server import create_app
from riskcal.workflow import canonical_json, create_session, export_report

from helpers import WALKTHROUGH_AXES, police_walkthrough


@pytest.fixture(scope="module")
def client(ctx):
    return TestClient(create_app(ctx))


def start_session(client) -> str:
    resp = client.post("/v1/sessions")
    assert resp.status_code == 201
    return resp.json()["session_id"]


def run_walkthrough(client, sid: str) -> None:
    assert client.post(f"/v1/sessions/{sid}/qis", json={"qis": "profile:police"}).status_code == 200
    for step, payload in [
        ("cluster", {}),
        ("pairs", {}),
        ("join", {}),
        ("parallel_sets", {"axes": WALKTHROUGH_AXES}),
        ("disclosures", {}),
    ]:
        resp = client.post(f"/v1/sessions/{sid}/steps/{step}", json=payload)
        assert resp.status_code == 200, resp.text


class TestSessionEndpoints:
    def test_create_and_inspect(self, client):
        sid = start_session(client)
        doc = client.get(f"/v1/sessions/{sid}").json()
        assert doc["session_id"] == sid
        assert [h["step"] for h in doc["history"]] == ["created"]

    def test_unknown_session_404(self, client):
        resp = client.get("/v1/sessions/doesnotexist")
        assert resp.status_code == 404
        assert resp.json()["error"]["code"] == "UnknownSession"

    def test_step_out_of_order_code(self, client):
        sid = start_session(client)
        resp = client.post(f"/v1/sessions/{sid}/steps/pairs", json={})
        assert resp.status_code == 409
        assert resp.json()["error"]["code"] == "StepOutOfOrder"

    def test_unknown_profile_code(self, client):
        sid = start_session(client)
        resp = client.post(f"/v1/sessions/{sid}/qis", json={"qis": "profile:astrology"})
        assert resp.status_code == 404
        assert resp.json()["error"]["code"] == "UnknownProfile"

    def test_full_walkthrough_and_report(self, client):
        sid = start_session(client)
        run_walkthrough(client, sid)
        report = client.get(f"/v1/sessions/{sid}/report", params={"redact": "true"})
        assert report.status_code == 200
        body = report.json()
        assert body["redacted"] is True
        assert body["disclosures"]["identity_count"] == 20

    def test_report_before_disclosures_409(self, client):
        sid = start_session(client)
        resp = client.get(f"/v1/sessions/{sid}/report")
        assert resp.status_code == 409
        assert resp.json()["error"]["code"] == "NothingToReport"

    def test_unredacted_needs_ack(self, client):
        sid = start_session(client)
        run_walkthrough(client, sid)
        resp = client.get(f"/v1/sessions/{sid}/report", params={"redact": "false"})
        assert resp.status_code == 403
        assert resp.json()["error"]["code"] == "RedactionNotAcknowledged"
        ok = client.get(
            f"/v1/sessions/{sid}/report", params={"redact": "false", "ack": "true"}
        )
        assert ok.status_code == 200
        assert ok.json()["redacted"] is False

    def test_sessions_are_isolated(self, client):
        a, b = start_session(client), start_session(client)
        client.post(f"/v1/sessions/{a}/qis", json={"qis": ["age"]})
        doc_b = client.get(f"/v1/sessions/{b}").json()
        assert doc_b["selected_qis"] == []


class TestParityWithDirectCalls:
    def test_http_report_bytes_equal_engine_bytes(self, client, ctx):
        sid = start_session(client)
        run_walkthrough(client, sid)
        http_bytes = client.get(f"/v1/sessions/{sid}/report", params={"redact": "true"}).content

        session = create_session(ctx)
        police_walkthrough(session)
        engine_bytes = canonical_json(export_report(session, redact=True))
        assert http_bytes == engine_bytes

    def test_step_outputs_match_engine(self, client, ctx):
        sid = start_session(client)
        client.post(f"/v1/sessions/{sid}/qis", json={"qis": "profile:police"})
        http_cluster = client.post(f"/v1/sessions/{sid}/steps/cluster", json={}).content

        session = create_session(ctx)
        workflow.set_quasi_identifiers(session, "profile:police")
        engine_cluster = canonical_json(workflow.run_step(session, "cluster", {}))
        assert http_cluster == engine_cluster


class TestCollectionEndpoints:
    def test_collection_listing(self, client):
        body = client.get("/v1/collection").json()
        assert body["size"] == 11
        refs = {f"{d['portal']}:{d['dataset_id']}" for d in body["datasets"]}
        assert "san-mateo.example:smc-wpc-demographics-2" in refs

    def test_profiles_listing(self, client):
        body = client.get("/v1/profiles").json()
        assert body["police"] == [
            "victim age", "victim gender", "victim race",
            "offender age", "offender gender", "location",
        ]

    def test_risk_passthrough(self, client):
        resp = client.get(
            "/v1/datasets/san-mateo.example:smc-wpc-demographics-2/risk",
            params={"keys": "age,race,sex", "threshold": 1},
        )
        assert resp.status_code == 200
        body = resp.json()
        assert body["summary"]["k"] == 1
        assert [f["key"] for f in body["entry_points"]] == [["28", "hawaiian", "F"]]

    def test_risk_unknown_dataset(self, client):
        resp = client.get("/v1/datasets/ghost.example:nothing/risk")
        assert resp.status_code == 404

    def test_session_histories_persisted(self, ctx, tmp_path):
        app = create_app(ctx, session_dir=tmp_path / "sessions")
        with TestClient(app) as persist_client:
            sid = persist_client.post("/v1/sessions").json()["session_id"]
            persist_client.post(f"/v1/sessions/{sid}/qis", json={"qis": ["age"]})
            history_file = tmp_path / "sessions" / f"{sid}.history.jsonl"
            assert history_file.exists()
            rows = workflow.load_history(history_file)
            assert [r["step"] for r in rows] == ["created", "qis"]
