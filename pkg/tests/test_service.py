import base64
import json

import numpy as np
import pytest
from fastapi.testclient import TestClient

from segconv.service import create_app
from segconv.tensor_io import sct_bytes_to_tensor


@pytest.fixture(scope="module")
def client():
    with TestClient(create_app(), raise_server_exceptions=False) as c:
        yield c


TINY_CONFIG = {"name": "tiny", "input_h": 4, "input_w": 4, "c_in": 2,
               "kernel_n": 3, "c_out": 2, "pad": 1, "repeats": 1}


def test_health(client):
    body = client.get("/health").json()
    assert body["status"] == "ok"


def test_gan_suite_configs_listed(client):
    configs = client.get("/configs/gan-suite").json()
    assert len(configs) == 14
    assert configs[0]["name"] == "dcgan_l2"
    assert all(cfg["pad"] == 2 and cfg["kernel_n"] == 4 for cfg in configs)


def test_run_endpoint(client):
    resp = client.post("/bench/run", json={"configs": [TINY_CONFIG],
                                           "options": {"seed": 5}})
    assert resp.status_code == 200
    body = resp.json()
    assert body["format_version"] == 1
    assert body["environment"]["seed"] == 5
    rec = body["layers"][0]
    assert rec["out_h"] == 7 and rec["out_w"] == 7
    assert rec["equivalence"]["passed"] is True
    assert rec["error"] is None


def test_run_rejects_unknown_option(client):
    resp = client.post("/bench/run", json={"configs": [TINY_CONFIG],
                                           "options": {"gpu": True}})
    assert resp.status_code == 422


def test_run_rejects_malformed_config(client):
    bad = dict(TINY_CONFIG, kernel_n=1)
    resp = client.post("/bench/run", json={"configs": [bad], "options": {}})
    assert resp.status_code == 422


def test_run_records_impossible_layer(client):
    impossible = {"name": "imp", "input_h": 1, "input_w": 1, "c_in": 1,
                  "kernel_n": 9, "c_out": 1, "pad": 0, "repeats": 1}
    resp = client.post("/bench/run", json={"configs": [impossible], "options": {}})
    assert resp.status_code == 200
    rec = resp.json()["layers"][0]
    assert rec["error"] is not None
    assert rec["equivalence"]["checked"] is False


def test_verify_endpoint(client):
    resp = client.post("/verify", json={"kernel_n": 5, "input_h": 4, "input_w": 4,
                                        "pad": 2})
    assert resp.status_code == 200
    body = resp.json()
    assert body["passed"] is True
    assert (body["out_h"], body["out_w"]) == (7, 7)
    assert body["mults_reference"] == 1225
    assert body["mults_segregated"] == 324


def test_verify_rejects_degenerate_kernel(client):
    resp = client.post("/verify", json={"kernel_n": 1, "input_h": 4, "input_w": 4})
    assert resp.status_code == 422


def test_verify_rejects_impossible_case(client):
    resp = client.post("/verify", json={"kernel_n": 9, "input_h": 1, "input_w": 1,
                                        "pad": 0})
    assert resp.status_code == 400


def test_convert_endpoint(client):
    ppm = b"P6 2 1 255\n" + bytes([255, 0, 0, 0, 0, 255])
    resp = client.post("/convert/ppm-to-sct",
                       json={"ppm_base64": base64.b64encode(ppm).decode()})
    assert resp.status_code == 200
    body = resp.json()
    assert (body["channels"], body["height"], body["width"]) == (3, 1, 2)
    tensor = sct_bytes_to_tensor(base64.b64decode(body["sct_base64"]))
    np.testing.assert_array_equal(tensor[:, 0, 0], [1.0, 0.0, 0.0])
    np.testing.assert_array_equal(tensor[:, 0, 1], [0.0, 0.0, 1.0])


def test_convert_rejects_bad_base64(client):
    resp = client.post("/convert/ppm-to-sct", json={"ppm_base64": "!!!"})
    assert resp.status_code == 400


def test_convert_rejects_non_ppm(client):
    resp = client.post("/convert/ppm-to-sct",
                       json={"ppm_base64": base64.b64encode(b"P5 1 1 255\n\x00").decode()})
    assert resp.status_code == 400
    assert "P6" in resp.json()["detail"]


def test_render_roundtrip(client):
    report = client.post("/bench/run", json={"configs": [TINY_CONFIG],
                                             "options": {"seed": 1}}).json()
    for fmt in ("markdown", "csv", "json"):
        resp = client.post("/report/render", json={"report": report, "format": fmt})
        assert resp.status_code == 200, fmt
        assert resp.json()["text"]
    md = client.post("/report/render",
                     json={"report": report, "format": "markdown"}).json()["text"]
    assert "| tiny |" in md
    rendered_json = client.post("/report/render",
                                json={"report": report, "format": "json"}).json()["text"]
    assert json.loads(rendered_json)["layers"][0]["name"] == "tiny"


def test_render_rejects_unknown_format(client):
    resp = client.post("/report/render", json={"report": {}, "format": "xml"})
    assert resp.status_code == 422
