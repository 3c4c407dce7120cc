"""HTTP service contract: endpoints, error mapping, JSON schema."""

import json
import warnings

import pytest

with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    from fastapi.testclient import TestClient

from zetaseries.api import app


@pytest.fixture(scope="module")
def client():
    with TestClient(app) as c:
        yield c


def test_health(client):
    resp = client.get("/health")
    assert resp.status_code == 200
    assert resp.json()["status"] == "ok"


def test_eval_lhs(client):
    resp = client.post(
        "/eval",
        json={"identity_id": "order-p", "side": "lhs", "params": {"s": "2", "z": "0"}},
    )
    assert resp.status_code == 200
    body = resp.json()
    assert abs(body["value"][0] - 1.6449340668482264) <= 1e-12
    assert body["value"][1] == 0.0
    assert set(body) == {"value", "err", "terms", "method"}


def test_eval_cfg_overrides(client):
    resp = client.post(
        "/eval",
        json={
            "identity_id": "order-p",
            "side": "rhs",
            "params": {"s": "2", "z": "0.5"},
            "cfg": {"target_abs_error": 1e-6},
        },
    )
    assert resp.status_code == 200
    assert resp.json()["err"] <= 1e-6


def test_eval_domain_error_is_400(client):
    resp = client.post(
        "/eval",
        json={"identity_id": "order-p", "side": "lhs", "params": {"s": "0.5", "z": "0"}},
    )
    assert resp.status_code == 400
    body = resp.json()
    assert body["error"] == "DomainError"
    assert "message" in body


def test_eval_boundary_error_is_400(client):
    resp = client.post(
        "/eval",
        json={"identity_id": "order-p", "side": "rhs", "params": {"s": "2", "z": "1"}},
    )
    assert resp.status_code == 400
    assert resp.json()["error"] == "BoundaryError"


def test_eval_bad_complex_literal_is_400(client):
    resp = client.post(
        "/eval",
        json={"identity_id": "order-p", "side": "lhs", "params": {"s": "two", "z": "0"}},
    )
    assert resp.status_code == 400


def test_verify_pass(client):
    resp = client.post(
        "/verify",
        json={"identity_id": "dirichlet", "params": {"spec": "mobius", "s": "2", "z": "0.5"}},
    )
    assert resp.status_code == 200
    body = resp.json()
    assert body["status"] == "pass"
    assert json.loads(json.dumps(body)) == body


def test_verify_skipped_guard(client):
    resp = client.post(
        "/verify",
        json={"identity_id": "order-p", "params": {"s": "2", "z": "1"}},
    )
    assert resp.status_code == 200
    assert resp.json()["status"] == "skipped(BoundaryError)"


def test_suite_single_entry(client):
    resp = client.post("/suite", json={"only": "7.11"})
    assert resp.status_code == 200
    body = resp.json()
    assert body["summary"]["total"] == 1
    assert body["all_pass"]


def test_suite_unknown_entry_is_400(client):
    resp = client.post("/suite", json={"only": "99"})
    assert resp.status_code == 400
    assert resp.json()["error"] == "DomainError"


def test_poles(client):
    resp = client.post("/poles", json={"s": "2", "count": 3})
    assert resp.status_code == 200
    body = resp.json()
    assert body["columns"] == ["n", "re", "im", "abs", "arg"]
    assert [row[1] for row in body["rows"]] == [-1.0, -4.0, -9.0]


def test_poles_requires_interior_s(client):
    resp = client.post("/poles", json={"s": "1", "count": 3})
    assert resp.status_code == 400
    assert resp.json()["error"] == "DomainError"


def test_residue_plain(client):
    resp = client.post("/residue", json={"spec": "ones", "s": "2", "n": 1})
    assert resp.status_code == 200
    body = resp.json()
    assert body["location"] == [-1.0, 0.0]
    assert abs(body["measured_residue"][0] - 1.0) <= 1e-6
    assert body["abs_error"] >= 0


def test_residue_weighted(client):
    import math

    resp = client.post("/residue", json={"s": "4", "n": 2, "q": "1", "m": 1})
    assert resp.status_code == 200
    body = resp.json()
    expected = -2.0 * math.log(2.0)
    assert abs(body["expected_residue"][0] - expected) <= 1e-12
    assert abs(body["measured_residue"][0] - expected) <= 1e-5 * abs(expected)


def test_residue_not_a_pole_is_400(client):
    resp = client.post("/residue", json={"spec": "mobius", "s": "2", "n": 4})
    assert resp.status_code == 400
    assert resp.json()["error"] == "NotAPoleError"


def test_bad_cfg_is_400(client):
    resp = client.post(
        "/eval",
        json={
            "identity_id": "order-p",
            "side": "lhs",
            "params": {"s": "2", "z": "0"},
            "cfg": {"max_terms": 2},
        },
    )
    assert resp.status_code == 400
