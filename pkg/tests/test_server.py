import json
import threading

import pytest
import requests

from driftwatch.canon import canonical_json
from driftwatch.server import build_server, parse_address
from driftwatch.errors import ConfigError

BASELINE_CSV = b"amount,segment\n" + b"".join(
    f"{10 + 3 * i},{'ab'[i % 2]}\n".encode() for i in range(30)
)


@pytest.fixture
def service(store, cfg):
    server = build_server(store, "127.0.0.1:0", cfg)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    host, port = server.server_address
    yield f"http://{host}:{port}"
    server.shutdown()
    server.server_close()


def test_health(service):
    response = requests.get(f"{service}/health")
    assert response.status_code == 200
    assert response.json() == {"status": "ok"}


def test_baseline_upload_and_fetch(service):
    created = requests.post(
        f"{service}/v1/baselines?name=prod", data=BASELINE_CSV,
        headers={"Content-Type": "text/csv"},
    )
    assert created.status_code == 201
    baseline_id = created.json()["baseline_id"]

    listed = requests.get(f"{service}/v1/baselines").json()["baselines"]
    assert [e["baseline_id"] for e in listed] == [baseline_id]
    assert listed[0]["name"] == "prod"

    fetched = requests.get(f"{service}/v1/baselines/{baseline_id}")
    assert fetched.status_code == 200
    assert fetched.json()["summary_id"] == baseline_id
    assert fetched.json()["record_count"] == 30
    assert fetched.json()["schema"] == {"amount": "numerical", "segment": "categorical"}


def test_self_validation_passes_and_persists_report(service):
    baseline_id = requests.post(
        f"{service}/v1/baselines", data=BASELINE_CSV
    ).json()["baseline_id"]

    validated = requests.post(
        f"{service}/v1/validate?baseline_id={baseline_id}", data=BASELINE_CSV
    )
    assert validated.status_code == 200
    report = validated.json()
    assert report["verdict"] == "pass"
    assert report["alerts_total"] == 0
    assert report["baseline_id"] == baseline_id

    fetched = requests.get(f"{service}/v1/reports/{report['report_id']}")
    assert fetched.status_code == 200
    assert fetched.json() == report


def test_unknown_ids_return_404_with_error_body(service):
    for path in (
        "/v1/baselines/deadbeefdeadbeef",
        "/v1/reports/deadbeefdeadbeef",
        "/v1/validate?baseline_id=deadbeefdeadbeef",
        "/v1/models/ghost/versions",
        "/v1/models/ghost/lineage",
        "/v1/models/ghost/best?metric=acc",
        "/v1/nowhere",
    ):
        if path.startswith("/v1/validate"):
            response = requests.post(f"{service}{path}", data=BASELINE_CSV)
        else:
            response = requests.get(f"{service}{path}")
        assert response.status_code == 404, path
        assert "error" in response.json(), path


def test_malformed_csv_is_400(service):
    baseline_id = requests.post(
        f"{service}/v1/baselines", data=BASELINE_CSV
    ).json()["baseline_id"]
    ragged = b"a,b\n1,2,3\n"
    assert requests.post(f"{service}/v1/baselines", data=ragged).status_code == 400
    response = requests.post(
        f"{service}/v1/validate?baseline_id={baseline_id}", data=ragged
    )
    assert response.status_code == 400
    assert "row 1" in response.json()["error"]


def test_missing_query_params_are_400(service):
    assert requests.post(f"{service}/v1/validate", data=BASELINE_CSV).status_code == 400
    made = requests.post(f"{service}/v1/models/m/versions", json={})
    assert made.status_code == 201
    assert requests.get(f"{service}/v1/models/m/best").status_code == 400


def test_model_version_lifecycle(service):
    draft1 = {"params": {"lr": "0.1"}, "metrics": {"acc": [0.8, 0.82, 0.81]}}
    created = requests.post(f"{service}/v1/models/churn/versions", json=draft1)
    assert created.status_code == 201
    assert created.json()["version"] == 1

    draft2 = {
        "parent_versions": [1],
        "metrics": {"acc": [0.9, 0.92, 0.91]},
        "feature_inputs": ["amount", "segment"],
    }
    second = requests.post(f"{service}/v1/models/churn/versions", json=draft2)
    assert second.json()["version"] == 2

    versions = requests.get(f"{service}/v1/models/churn/versions").json()
    assert [v["version"] for v in versions["versions"]] == [1, 2]

    one = requests.get(f"{service}/v1/models/churn/versions/1").json()
    assert one["params"] == {"lr": "0.1"}

    lineage = requests.get(f"{service}/v1/models/churn/lineage").json()
    assert lineage == {"model_name": "churn", "versions": [1, 2], "edges": [[1, 2]]}

    compared = requests.post(
        f"{service}/v1/models/churn/compare",
        json={"metric": "acc", "versions": [1, 2], "direction": "max"},
    )
    assert compared.status_code == 200
    assert compared.json()["winner"] == 2

    best = requests.get(f"{service}/v1/models/churn/best?metric=acc&direction=max")
    assert best.status_code == 200
    assert best.json()["best_version"] == 2


def test_registry_conflict_and_semantic_errors(service):
    requests.post(f"{service}/v1/models/m/versions", json={"metrics": {"a": [1, 2]}})
    conflict = requests.post(
        f"{service}/v1/models/m/versions", json={"parent_versions": [9]}
    )
    assert conflict.status_code == 409
    assert "parent" in conflict.json()["error"]

    requests.post(f"{service}/v1/models/m/versions", json={"metrics": {"a": 0.5}})
    mixed = requests.post(
        f"{service}/v1/models/m/compare",
        json={"metric": "a", "versions": [1, 2], "direction": "max"},
    )
    assert mixed.status_code == 422
    assert "mixed" in mixed.json()["error"]

    bad_json = requests.post(
        f"{service}/v1/models/m/versions",
        data=b"{not json",
        headers={"Content-Type": "application/json"},
    )
    assert bad_json.status_code == 400


def test_store_config_is_reread_per_request(service, store):
    store.config_path.write_text('{"histogram_bins": 4}')
    baseline_id = requests.post(
        f"{service}/v1/baselines", data=BASELINE_CSV
    ).json()["baseline_id"]
    doc = requests.get(f"{service}/v1/baselines/{baseline_id}").json()
    assert doc["config_used"]["histogram_bins"] == 4
    assert len(doc["features"]["amount"]["hist_counts"]) <= 4


def test_validate_notifies_webhook(store, cfg, webhook):
    from driftwatch.config import merge_overrides
    import time

    noisy = merge_overrides(cfg, {"notify_url": webhook.url})
    server = build_server(store, "127.0.0.1:0", noisy)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    host, port = server.server_address
    base = f"http://{host}:{port}"
    try:
        baseline_id = requests.post(
            f"{base}/v1/baselines", data=b"x\n" + b"\n".join(str(i).encode() for i in range(1, 101))
        ).json()["baseline_id"]
        shifted = b"x\n" + b"\n".join(str(i + 60).encode() for i in range(1, 101))
        report = requests.post(
            f"{base}/v1/validate?baseline_id={baseline_id}", data=shifted
        ).json()
        assert report["verdict"] == "fail"
        deadline = time.time() + 5
        while not webhook.requests and time.time() < deadline:
            time.sleep(0.05)
        assert len(webhook.requests) == 1
        assert webhook.requests[0]["body"]["report_id"] == report["report_id"]
    finally:
        server.shutdown()
        server.server_close()


def test_responses_are_canonical_json(service):
    baseline_id = requests.post(
        f"{service}/v1/baselines", data=BASELINE_CSV
    ).json()["baseline_id"]
    raw = requests.get(f"{service}/v1/baselines/{baseline_id}").content
    assert raw.decode() == canonical_json(json.loads(raw))


def test_concurrent_version_posts_never_duplicate(service):
    results = []

    def log_one():
        response = requests.post(f"{service}/v1/models/stress/versions", json={})
        results.append(response.json()["version"])

    threads = [threading.Thread(target=log_one) for _ in range(24)]
    for thread in threads:
        thread.start()
    for thread in threads:
        thread.join()
    assert sorted(results) == list(range(1, 25))


def test_parse_address():
    assert parse_address("0.0.0.0:9000") == ("0.0.0.0", 9000)
    assert parse_address(":8080") == ("127.0.0.1", 8080)
    with pytest.raises(ConfigError):
        parse_address("nohost")
    with pytest.raises(ConfigError):
        parse_address("host:notaport")
