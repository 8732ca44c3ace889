import math

import pytest
from fastapi.testclient import TestClient

from qcomb.service import create_app
from qcomb.filter_parser import serialize
from qcomb.filter_ir import catalog
from qcomb.statevec import format_state
from qcomb import states


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


class TestMeta:
    def test_health(self, client):
        body = client.get("/health").json()
        assert body["status"] == "ok"

    def test_filters_listing(self, client):
        body = client.get("/filters").json()
        names = {f["name"] for f in body}
        assert {"comb1", "F2_1", "F4_1", "F5_4", "F6_2"} <= names
        f41 = next(f for f in body if f["name"] == "F4_1")
        assert f41["num_qubits"] == 4 and f41["order"] == 3

    def test_filter_detail(self, client):
        body = client.get("/filters/F2_1").json()
        assert body["canonical"] == "filter F2_1 { qubits: 2; prefactor: 1/1; block [y, y] }"

    def test_unknown_filter_is_400(self, client):
        assert client.get("/filters/F9_9").status_code == 400

    def test_states_listing(self, client):
        body = client.get("/states").json()
        byname = {s["name"]: s for s in body}
        assert byname["xi7"]["length"] == 7
        assert byname["xi7_printed"]["normalized"] is False


class TestEval:
    def test_catalog_pair(self, client):
        body = client.post(
            "/eval", json={"filter_name": "F4_2", "state_name": "phi1"}
        ).json()
        assert body["modulus"] == pytest.approx(1.0)
        assert body["degree"] == 8

    def test_inline_filter_and_state(self, client):
        src = serialize(catalog().get("F2_1"))
        text = format_state(states.get("bell"))
        body = client.post(
            "/eval", json={"filter_source": src, "state_text": text, "brute": True}
        ).json()
        assert body["modulus"] == pytest.approx(1.0)

    def test_qubit_mismatch_is_400(self, client):
        resp = client.post("/eval", json={"filter_name": "F2_1", "state_name": "ghz3"})
        assert resp.status_code == 400

    def test_both_filter_fields_rejected(self, client):
        resp = client.post(
            "/eval",
            json={"filter_name": "F2_1", "filter_source": "x", "state_name": "bell"},
        )
        assert resp.status_code == 422


class TestTable:
    def test_cells(self, client):
        body = client.get("/table").json()
        cells = {(c["filter"], c["state"]): c for c in body["cells"]}
        assert cells[("F5_1", "psi6")]["computed_abs"] == pytest.approx(3 * math.sqrt(3) / 32)
        assert body["all_match"] is False  # known length-7 defect


class TestCheck:
    def test_product(self, client):
        body = client.post(
            "/check", json={"check": "product", "filter_name": "F3_1", "samples": 30, "seed": 4}
        ).json()
        assert body["pass"] is True

    def test_slocc(self, client):
        body = client.post(
            "/check",
            json={"check": "slocc", "filter_name": "F2_2", "state_name": "bell", "samples": 20, "seed": 4},
        ).json()
        assert body["pass"] is True

    def test_perm(self, client):
        body = client.post(
            "/check", json={"check": "perm", "filter_name": "F3_2", "state_name": "w3"}
        ).json()
        assert body["pass"] is True

    def test_product_with_state_rejected(self, client):
        resp = client.post(
            "/check", json={"check": "product", "filter_name": "F2_1", "state_name": "bell"}
        )
        assert resp.status_code == 422


class TestMeasures:
    def test_classify(self, client):
        body = client.post("/classify", json={"state_name": "phi4"}).json()
        assert body["condition_i"]["pass"] is True
        assert body["condition_i_strong"]["pass"] is True

    def test_concurrence(self, client):
        body = client.post("/concurrence", json={"state_name": "bell"}).json()
        assert body["pure_value"] == pytest.approx(1.0)

    def test_tangle3(self, client):
        body = client.post("/tangle3", json={"state_name": "ghz3"}).json()
        assert body["via_F3_1"] == pytest.approx(1.0)
        assert body["agree"] is True

    def test_concurrence_needs_exactly_one_input(self, client):
        resp = client.post("/concurrence", json={})
        assert resp.status_code == 422


class TestParse:
    def test_round_trip(self, client):
        src = serialize(catalog().get("F4_3"))
        body = client.post("/parse", json={"source": src}).json()
        assert body["filters"][0]["name"] == "F4_3"
        assert body["filters"][0]["order"] == 6

    def test_bad_source_is_400(self, client):
        resp = client.post("/parse", json={"source": "filter ( nope"})
        assert resp.status_code == 400
