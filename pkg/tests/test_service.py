"""HTTP API surface."""

import json

import pytest
from fastapi.testclient import TestClient

from galdep.service import create_app


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


def test_examples_listing(client):
    r = client.get("/examples")
    assert r.status_code == 200
    names = {e["name"] for e in r.json()["examples"]}
    assert {"convolve", "convolve-pair", "energy", "energy-pair"} <= names


def test_session_from_source(client):
    r = client.post("/session", json={"source": "1 + 2"})
    assert r.status_code == 200
    body = r.json()
    assert body["views"][0]["result"] == {"k": "int", "v": 3, "ann": None}


def test_session_with_data(client):
    r = client.post("/session", json={
        "source": "sum [x | x <- xs]",
        "data": {"xs": [1, 2, 3]},
    })
    assert r.status_code == 200
    assert r.json()["views"][0]["result"]["v"] == 6


def test_bwd_fwd_round_trip(client):
    sid = client.post("/session", json={"example": "convolve"}).json()["id"]
    r1 = client.post(f"/session/{sid}/bwd", json={"selection": {"cell": [2, 2]}})
    assert r1.status_code == 200
    body = r1.json()
    kernel_cells = [p for p in body["env_doc"]["paths"] if p.get("in") == "kernel"]
    assert len([p for p in kernel_cells
                if isinstance(p["path"][0], dict) and "cell" in p["path"][0]]) == 9
    r2 = client.post(f"/session/{sid}/fwd", json={
        "selection": body["env_doc"], "highlights": body["highlights"],
    })
    assert r2.status_code == 200
    avail = sorted(
        tuple(p["path"][0]["cell"]) for p in r2.json()["output_doc"]["paths"]
        if isinstance(p["path"][0], dict) and "cell" in p["path"][0]
    )
    assert avail == [(1, 1), (2, 2)]
    r3 = client.post(f"/session/{sid}/leq", json={
        "a": {"cell": [2, 2]}, "b": r2.json()["output_doc"],
    })
    assert r3.json() == {"leq": True}


def test_fwd_dual_and_bwd_dual(client):
    sid = client.post("/session", json={"example": "convolve"}).json()["id"]
    sel = {"paths": [{"in": "kernel", "path": [{"cell": [1, 2]}]}]}
    r = client.post(f"/session/{sid}/fwd-dual", json={"selection": sel})
    assert r.status_code == 200
    cells = sorted(
        tuple(p["path"][0]["cell"]) for p in r.json()["output_doc"]["paths"]
        if isinstance(p["path"][0], dict) and "cell" in p["path"][0]
    )
    assert cells == sorted((i, j) for i in (2, 3, 4, 5) for j in range(1, 6))
    out_doc = r.json()["output_doc"]
    r2 = client.post(f"/session/{sid}/bwd-dual", json={"selection": out_doc})
    assert r2.status_code == 200
    kernel_row1 = [
        p for p in r2.json()["env_doc"]["paths"]
        if p.get("in") == "kernel" and isinstance(p["path"][0], dict)
        and "cell" in p["path"][0] and p["path"][0]["cell"][0] == 1
    ]
    assert len(kernel_row1) == 3


def test_link_endpoint(client):
    sid = client.post("/session", json={"example": "energy-pair"}).json()["id"]
    r = client.post(f"/session/{sid}/link", json={
        "selection": [{"index": 1}, {"field": "height"}],
        "view": "bars",
    })
    assert r.status_code == 200
    assert r.json()["to"] == "points"


def test_repeated_queries_identical(client):
    sid = client.post("/session", json={"example": "convolve"}).json()["id"]
    bodies = set()
    for _ in range(3):
        r = client.post(f"/session/{sid}/bwd", json={"selection": {"cell": [3, 3]}})
        bodies.add(json.dumps(r.json(), sort_keys=True))
    assert len(bodies) == 1


def test_error_codes(client):
    sid = client.post("/session", json={"example": "convolve"}).json()["id"]
    assert client.post(f"/session/{sid}/bwd",
                       json={"selection": {"cell": [99, 99]}}).status_code == 400
    assert client.post("/session/missing/bwd",
                       json={"selection": {"cell": [1, 1]}}).status_code == 404
    assert client.post("/session", json={"source": "1 +"}).status_code == 422
    assert client.post("/session", json={"source": "f 1"}).status_code == 422
    assert client.post("/session", json={}).status_code == 400


def test_bitvec_session(client):
    r = client.post("/session", json={"source": "[x | x <- xs]",
                                      "data": {"xs": [1, 2]}, "colors": 2})
    assert r.status_code == 200
    sid = r.json()["id"]
    sel = {"lattice": "bitvec2",
           "paths": [{"path": ["head"], "ann": [True, False]},
                     {"path": ["tail", "head"], "ann": [False, True]}]}
    r2 = client.post(f"/session/{sid}/bwd", json={"selection": sel})
    assert r2.status_code == 200
    xs_entries = [p for p in r2.json()["env_doc"]["paths"] if p.get("in") == "xs"]
    anns = {json.dumps(p["path"]): p["ann"] for p in xs_entries}
    assert anns.get('["head"]') == [True, False]
    assert anns.get('["tail", "head"]') == [False, True]


def test_inline_multi_view_session(client):
    r = client.post("/session", json={
        "views": [{"name": "tens", "source": "[x * 10 | x <- xs]"},
                  {"name": "succ", "source": "[x + 1 | x <- xs]"}],
        "data": {"xs": [1, 2]},
    })
    assert r.status_code == 200
    sid = r.json()["id"]
    r2 = client.post(f"/session/{sid}/link",
                     json={"selection": ["head"], "view": "tens"})
    assert r2.status_code == 200
    assert r2.json()["to"] == "succ"


def test_views_addressable_by_index(client):
    sid = client.post("/session", json={"example": "convolve-pair"}).json()["id"]
    r = client.post(f"/session/{sid}/bwd",
                    json={"selection": {"cell": [1, 1]}, "view": "2"})
    assert r.status_code == 200
