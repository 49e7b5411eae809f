"""
API endpoints through the FastAPI test client.
"""

from fastapi.testclient import TestClient

from tscycles.main import app


client = TestClient(app)


def test_root():
    r = client.get("/")
    assert r.status_code == 200
    assert r.json()["versions"][0]["id"] == "v1"


def test_series():
    r = client.get("/v1/series")
    assert [s["name"] for s in r.json()] == ["PMN", "PMA", "TotalMD"]
    assert r.json()[0]["end"] == "Dec 2020"

    r = client.get("/v1/series/total")
    assert r.json()["name"] == "TotalMD"
    assert len(r.json()["values"]) == 536

    r = client.get("/v1/series/510k")
    assert r.status_code == 404


def test_describe_and_acf():
    r = client.get("/v1/series/PMA/describe")
    assert r.status_code == 200
    assert r.json()["maximum"] == 335

    r = client.get("/v1/series/PMA/acf", params={"max_lag": 24})
    assert len(r.json()["rho"]) == 25

    r = client.get("/v1/series/PMA/acf", params={"max_lag": 1000})
    assert r.status_code == 400


def test_characteristics():
    r = client.get("/v1/characteristics/PMN/tests", params={"suite": "normality"})
    assert r.status_code == 200
    assert set(r.json()) == {"anderson_darling", "cramer_von_mises", "lilliefors"}

    r = client.get("/v1/characteristics/PMN/tests", params={"suite": "other"})
    assert r.status_code == 422

    r = client.get("/v1/characteristics/PMN/breaks")
    assert r.json()["breakpoints"]["break_indices"] == [81, 247, 328]


def test_periodicity():
    r = client.get("/v1/periodicity/cycles", params={"period_years": 24.25})
    assert r.json()["band"] == "kuznets"

    r = client.get("/v1/periodicity/cycles", params={"period_years": -1})
    assert r.status_code == 422

    r = client.get("/v1/periodicity/TotalMD/frequency")
    assert r.json()["period"] == 3

    r = client.get("/v1/periodicity/TotalMD/peaks")
    body = r.json()
    assert {191, 482} <= {p["index"] for p in body["peaks"]}
    assert body["separation"]["period_years"] == 24.25
    assert body["separation"]["classification"]["band"] == "kuznets"

    r = client.get("/v1/periodicity/PMN/decompose", params={"method": "rmaf"})
    assert set(r.json()) >= {"trend", "seasonal", "remainder"}


def test_report_parameters():
    r = client.get("/v1/report/parameters")
    assert r.json()["ceemdan"]["ensemble_size"]["value"] == 250

    r = client.post("/v1/report", json={"alpha": 0.7})
    assert r.status_code == 422

    r = client.post("/v1/report", json={"parameters": {"nope": {"x": 1}}})
    assert r.status_code == 400
