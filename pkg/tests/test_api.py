import pytest
from fastapi.testclient import TestClient

from src.config import Config


@pytest.fixture
def client(monkeypatch, reports_dir):
    monkeypatch.setattr(Config, "REPORTS_DIR", str(reports_dir))
    from api import app

    with TestClient(app) as test_client:
        yield test_client


def test_root_and_health(client, reports_dir):
    assert client.get("/").json()["status"] == "running"
    health = client.get("/health").json()
    assert health["status"] == "healthy"
    assert health["reports_dir"] == str(reports_dir)


def test_elements(client):
    response = client.post("/elements", json={"n": 2, "x": "(1,2)", "y": "(1,3)(2,4)"})
    assert response.status_code == 200
    body = response.json()
    assert body["product"] == "(1,3,2,4)"
    assert body["x"]["in_kn"] is True
    assert body["y"]["portrait"] == "4"
    assert body["conjugate"] == "(3,4)"


def test_invalid_element_is_a_bad_request(client):
    response = client.post("/elements", json={"n": 2, "x": "(1,3)"})
    assert response.status_code == 400


def test_groups(client):
    response = client.post("/groups", json={"n": 2, "generators": "(1,3,2,4),(1,2)"})
    body = response.json()
    assert body["group"]["order"] == 8
    assert body["frattini_order"] == 2
    assert body["frattini_rank"] == 2
    assert len(body["maximal_subgroups"]) == 3
    assert body["kn_intersection_order"] == 4
    assert body["centralizer_order"] == 2
    assert len(body["elements"]) == 8


def test_conjugacy_and_replay(client):
    response = client.post("/conjugacy", json={"n": 2, "H": "(1,3)(2,4)", "G": "(1,4)(2,3)"})
    record = response.json()
    assert record["verdict"] == "P_HOLDS"
    assert record["elementwise"] is True
    assert record["global"] is True
    assert record["witness"] == "10"

    replayed = client.post("/replay", json=record).json()
    assert replayed["matches"] is True

    record["witness"] = "00"
    assert client.post("/replay", json=record).json()["matches"] is False


def test_markov(client):
    body = client.get("/markov/3").json()
    assert body["order"] == 64
    assert body["contains_transitive"] is True
    assert client.get("/markov/99").status_code == 400


def test_reports(client):
    assert client.get("/reports").json() == []
    assert client.get("/reports/theorem/summary").status_code == 404
    assert client.get("/reports/the..orem/summary").status_code == 400
