"""HTTP service: endpoint contracts, engine-cache reuse, error mapping."""

import pytest
from fastapi.testclient import TestClient

from bailout_dividends.levy import paper_model
from bailout_dividends.service import create_app

Q = 0.1


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


def _model() -> dict:
    return paper_model().to_dict()


def _cl_model() -> dict:
    return {"drift": 1.0, "sigma": 0.0,
            "jumps": {"type": "compound_poisson", "rate": 0.4,
                      "dist": {"type": "exponential", "mean": 2.0}}}


def test_health(client):
    resp = client.get("/health")
    assert resp.status_code == 200
    assert resp.json() == {"status": "ok"}


def test_scale_evaluate(client):
    resp = client.post("/scale/evaluate", json={
        "model": _model(), "q": Q, "points": [1.0, 2.0], "functions": ["w", "z"]})
    assert resp.status_code == 200
    body = resp.json()
    assert body["phi"] == pytest.approx(0.2142471527563634, abs=1e-10)
    assert set(body["values"]) == {"w", "z"}
    assert len(body["values"]["w"]) == 2
    assert body["values"]["z"][1] > body["values"]["z"][0] > 1.0


def test_scale_rejects_unknown_function(client):
    resp = client.post("/scale/evaluate", json={
        "model": _model(), "q": Q, "points": [1.0], "functions": ["nope"]})
    assert resp.status_code == 422


def test_barrier_endpoint(client):
    resp = client.post("/solve/barrier", json={
        "model": _model(), "q": Q, "lam": 2.0, "x": 1.0})
    assert resp.status_code == 200
    body = resp.json()
    assert body["a_lambda"] == pytest.approx(3.4362, abs=1e-3)
    rep = body["value"]
    assert rep["combined"] == pytest.approx(
        rep["dividends_npv"] - 2.0 * rep["injections_npv"])


def test_barrier_at_zero_bounded_variation(client):
    # small multiplier on a bounded-variation model: barrier 0, closed form
    resp = client.post("/solve/barrier", json={
        "model": _cl_model(), "q": Q, "lam": 1.2, "x": 2.0})
    assert resp.status_code == 200
    body = resp.json()
    assert body["a_lambda"] == 0.0
    assert body["value"]["dividends_npv"] == pytest.approx(2.0 + 1.0 / Q)
    assert body["value"]["injections_npv"] == pytest.approx((1.0 - 0.2) / Q)


def test_thresholds_endpoint(client):
    resp = client.post("/solve/thresholds", json={
        "model": _model(), "q": Q, "lam": 2.0, "delta": 0.05})
    assert resp.status_code == 200
    body = resp.json()
    assert 0 < body["c1"] < body["a_lambda"] < body["c2"]
    assert body["foc_residual"] <= 1e-9


def test_constrained_endpoint_and_infeasible(client):
    ok = client.post("/solve/constrained", json={
        "model": _model(), "q": Q, "x": 3.0, "K": 2.7})
    assert ok.status_code == 200
    body = ok.json()
    assert body["status"] == "interior_optimum"
    assert body["lambda_star"] > 1.0
    assert body["policy"]["type"] == "barrier"

    bad = client.post("/solve/constrained", json={
        "model": _model(), "q": Q, "x": 3.0, "K": 0.1})
    assert bad.status_code == 200
    assert bad.json()["status"] == "infeasible"
    assert bad.json()["value"] is None


def test_simulate_endpoint_deterministic(client):
    payload = {"model": _model(), "q": Q, "x": 1.0,
               "policy": {"type": "barrier", "a": 2.0},
               "config": {"n_paths": 500, "horizon": 20.0, "seed": 5}}
    r1 = client.post("/simulate", json=payload)
    r2 = client.post("/simulate", json=payload)
    assert r1.status_code == 200
    assert r1.json() == r2.json()
    assert r1.json()["n_paths_used"] == 500


def test_simulate_pair_policy(client):
    resp = client.post("/simulate", json={
        "model": _model(), "q": Q, "x": 1.0,
        "policy": {"type": "pair", "c1": 1.0, "c2": 3.0, "delta": 0.05},
        "config": {"n_paths": 200, "horizon": 10.0, "seed": 5}})
    assert resp.status_code == 200
    assert resp.json()["dividends_mean"] > 0


def test_simulate_exit_endpoint(client):
    resp = client.post("/simulate/exit", json={
        "model": _model(), "q": Q, "x": 1.5, "b": 0.0, "a": 3.0,
        "config": {"n_paths": 500, "horizon": 60.0, "seed": 5}})
    assert resp.status_code == 200
    body = resp.json()
    assert 0 < body["up"]["dividends_mean"] < 1
    assert 0 < body["down"]["dividends_mean"] < 1


def test_exit_ordering_validated(client):
    resp = client.post("/simulate/exit", json={
        "model": _model(), "q": Q, "x": 5.0, "b": 0.0, "a": 3.0,
        "config": {"n_paths": 10}})
    assert resp.status_code == 422


def test_policy_union_validation(client):
    resp = client.post("/simulate", json={
        "model": _model(), "q": Q, "x": 1.0,
        "policy": {"type": "barrier"},                 # missing 'a'
        "config": {"n_paths": 10}})
    assert resp.status_code == 422


def test_domain_error_maps_to_400(client):
    resp = client.post("/solve/barrier", json={
        "model": {"drift": -1.0, "sigma": 0.0}, "q": Q, "lam": 2.0})
    assert resp.status_code == 400
    body = resp.json()
    assert body["kind"] == "domain"
    assert "drift" in body["error"]


def test_figures_endpoint(client):
    resp = client.post("/figures/3", json={"model": _model(), "q": Q,
                                           "x_grid": [0.5, 1.0, 2.0]})
    assert resp.status_code == 200
    tables = resp.json()["tables"]
    assert set(tables) == {"zeta", "thresholds"}
    th = tables["thresholds"]
    assert th["headers"] == ["lambda", "a_lambda", "c1", "c2", "g_max"]
    lam1 = th["rows"][0]
    assert lam1[0] == 1.0 and lam1[1] == 0.0 and lam1[2] == 0.0


def test_figures_bad_id(client):
    resp = client.post("/figures/7", json={"model": _model(), "q": Q})
    assert resp.status_code == 400


def test_figure1_envelope_dominated(client):
    resp = client.post("/figures/1", json={
        "model": _model(), "q": Q, "x_grid": [1.0, 3.0],
        "lambda_grid": [1.5, 2.0, 3.0]})
    assert resp.status_code == 200
    table = resp.json()["tables"]["envelope"]
    idx = {h: i for i, h in enumerate(table["headers"])}
    for row in table["rows"]:
        assert row[idx["envelope"]] <= row[idx["curve_value"]] + 1e-12
