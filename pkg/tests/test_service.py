from __future__ import annotations

import json

import pytest
from fastapi.testclient import TestClient

from scorealign.service import create_app
from conftest import add_page_images, make_repeat_project, make_self_aligned_project


@pytest.fixture
def service_root(tmp_path):
    root = tmp_path / "projects"
    root.mkdir()
    make_repeat_project(root / "repeat4")
    add_page_images(root / "repeat4")
    make_self_aligned_project(root / "selfplay")
    return root


@pytest.fixture
def client(service_root):
    return TestClient(create_app(service_root))


class TestProjectListing:
    def test_lists_projects_with_measures(self, client):
        assert client.get("/projects").json() == ["repeat4", "selfplay"]

    def test_unknown_project_404(self, client):
        assert client.get("/projects/ghost/measures").status_code == 404

    def test_traversal_rejected(self, client):
        assert client.get("/projects/%2e%2e/measures").status_code == 404


class TestPagesAndMeasures:
    def test_page_bytes_served(self, client, service_root):
        response = client.get("/projects/repeat4/pages/0")
        assert response.status_code == 200
        assert response.headers["content-type"] == "image/png"
        assert response.content == (service_root / "repeat4" / "pages" / "000.png").read_bytes()

    def test_missing_page_404(self, client):
        assert client.get("/projects/repeat4/pages/7").status_code == 404

    def test_measures_content(self, client, service_root):
        response = client.get("/projects/repeat4/measures")
        assert response.status_code == 200
        assert response.content == (service_root / "repeat4" / "measures.json").read_bytes()
        assert len(response.json()) == 4


class TestJumps:
    def test_put_then_logical_order(self, client, service_root):
        response = client.put("/projects/repeat4/jumps", json=[{"from": 3, "to": 0}])
        assert response.status_code == 200
        order = client.get("/projects/repeat4/logical-order")
        assert order.json() == [0, 1, 2, 3, 0, 1, 2, 3]
        # The stored artifact is whatever the endpoint returned, byte for byte.
        assert order.content == (service_root / "repeat4" / "logical_order.json").read_bytes()

    def test_get_jumps_returns_stored_bytes(self, client, service_root):
        client.put("/projects/repeat4/jumps", json=[{"from": 3, "to": 0}])
        response = client.get("/projects/repeat4/jumps")
        assert response.content == (service_root / "repeat4" / "jumps.json").read_bytes()
        assert response.json() == [{"from": 3, "to": 0}]

    def test_jumps_default_empty(self, client, tmp_path, service_root):
        make_repeat_project(service_root / "bare", jump_pairs=None)
        assert client.get("/projects/bare/jumps").json() == []
        assert client.get("/projects/bare/logical-order").json() == [0, 1, 2, 3]

    def test_self_jump_rejected_with_violations(self, client):
        response = client.put("/projects/repeat4/jumps", json=[{"from": 2, "to": 2}])
        assert response.status_code == 422
        violations = response.json()["violations"]
        assert violations and violations[0]["kind"] == "self_jump"

    def test_unreachable_volta_rejected(self, client):
        body = [{"from": 1, "to": 3}, {"from": 2, "to": 0}]
        response = client.put("/projects/repeat4/jumps", json=body)
        assert response.status_code == 422
        assert any(v["kind"] == "unreachable" for v in response.json()["violations"])

    def test_replacement_is_whole_list(self, client):
        client.put("/projects/repeat4/jumps", json=[{"from": 3, "to": 0}])
        client.put("/projects/repeat4/jumps", json=[])
        assert client.get("/projects/repeat4/jumps").json() == []
        assert client.get("/projects/repeat4/logical-order").json() == [0, 1, 2, 3]

    def test_malformed_body_rejected(self, client):
        assert client.put("/projects/repeat4/jumps", json={"from": 1}).status_code == 422
        assert client.put("/projects/repeat4/jumps", json=[{"from": "x", "to": 0}]).status_code == 422


class TestAlign:
    def test_align_endpoint_runs_pipeline(self, client, service_root):
        client.put("/projects/selfplay/jumps", json=[])
        response = client.post("/projects/selfplay/align")
        assert response.status_code == 200
        body = response.json()
        assert body["num_measures"] == 2
        alignment = client.get("/projects/selfplay/alignment")
        assert alignment.status_code == 200
        assert alignment.content == (service_root / "selfplay" / "alignment.json").read_bytes()
        assert alignment.json()["num_measures"] == 2

    def test_align_missing_inputs_409(self, client):
        # repeat4 has no noteheads or onsets; unroll first so that isn't the gap.
        client.put("/projects/repeat4/jumps", json=[{"from": 3, "to": 0}])
        response = client.post("/projects/repeat4/align")
        assert response.status_code == 409

    def test_align_without_logical_order_409(self, client, service_root):
        make_self_aligned_project(service_root / "noorder")
        response = client.post("/projects/noorder/align")
        assert response.status_code == 409

    def test_alignment_missing_404(self, client):
        assert client.get("/projects/repeat4/alignment").status_code == 404
