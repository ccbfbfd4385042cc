"""HTTP routes: auth, status mapping, enumeration resistance, fuzzing."""

import json

import pytest
from fastapi.testclient import TestClient

from deskqa import Platform
from deskqa.errors import InvalidToken, ValidationFailed
from deskqa.gateway import ServerConfig, authenticate, create_app, parse_config
from deskqa.modelhub import WorkerSpec
from deskqa.skills import Principal

from conftest import ALICE, stock_workers

TOKENS = {"tok-alice": "alice", "tok-bob": "bob"}


@pytest.fixture
def client():
    platform = Platform()
    stock_workers(platform)
    app = create_app(platform, ServerConfig(tokens=TOKENS))
    with TestClient(app, raise_server_exceptions=False) as c:
        c.platform = platform
        yield c


def auth(token):
    return {"Authorization": f"Bearer {token}"}


def register_skill(client, token="tok-alice", **overrides):
    body = {
        "name": "reader",
        "skill_type": "extractive",
        "requires_context": True,
        "visibility": "public",
        "hosting": "internal",
        "pipeline": {"reader_worker": "extract"},
    }
    body.update(overrides)
    resp = client.post("/api/skills", json=body, headers=auth(token))
    assert resp.status_code == 201, resp.text
    return resp.json()


class TestAuthenticate:
    def test_no_header_is_anonymous(self):
        principal = authenticate(None, TOKENS)
        assert principal.user_id == "anonymous"

    def test_known_token(self):
        assert authenticate("Bearer tok-alice", TOKENS).user_id == "alice"

    def test_unknown_token(self):
        with pytest.raises(InvalidToken):
            authenticate("Bearer bogus", TOKENS)

    def test_malformed_header(self):
        with pytest.raises(InvalidToken):
            authenticate("Basic dXNlcjpwYXNz", TOKENS)

    def test_config_rejects_non_injective_tokens(self):
        with pytest.raises(ValidationFailed):
            parse_config({"tokens": {"t1": "alice", "t2": "alice"}})

    def test_config_rejects_reserved_user(self):
        with pytest.raises(ValidationFailed):
            parse_config({"tokens": {"t1": "anonymous"}})


class TestDatastoreRoutes:
    def test_create_list_ingest_search(self, client):
        assert client.post("/api/datastores", json={"name": "nq"}).status_code == 201
        resp = client.get("/api/datastores")
        assert resp.status_code == 200
        assert resp.json()["datastores"][0]["name"] == "nq"

        docs = [
            {"id": "D1", "text": "the cat sat"},
            {"id": "D2", "text": "the dog barked"},
            {"text": "cat and dog"},  # id auto-assigned
        ]
        resp = client.post("/api/datastores/nq/documents", json={"documents": docs})
        assert resp.status_code == 200 and resp.json()["added"] == 3

        assert client.post("/api/datastores/nq/indices/sparse", json={}).status_code == 200
        resp = client.post("/api/datastores/nq/search", json={"index": "sparse", "query": "cat", "k": 5})
        assert resp.status_code == 200
        assert [r["doc_id"] for r in resp.json()["results"]] == ["D1", "doc-3"]

    def test_dense_build_and_search(self, client):
        client.post("/api/datastores", json={"name": "nq"})
        docs = [{"id": f"D{i}", "text": f"word{i} filler text"} for i in range(10)]
        client.post("/api/datastores/nq/documents", json={"documents": docs})
        resp = client.post(
            "/api/datastores/nq/indices/dense",
            json={"embedder": "hash-embed-64", "dim": 64, "nlist": 3, "quantizer": "none", "seed": 1},
        )
        assert resp.status_code == 200 and resp.json()["nlist"] == 3
        resp = client.post(
            "/api/datastores/nq/search", json={"index": "dense", "query": "word3 filler", "k": 2}
        )
        assert resp.status_code == 200 and len(resp.json()["results"]) == 2

    def test_unknown_datastore_404(self, client):
        resp = client.post("/api/datastores/ghost/search", json={"index": "sparse", "query": "x", "k": 1})
        assert resp.status_code == 404
        assert resp.json()["error"]["code"] == "unknown_datastore"

    def test_duplicate_create_400(self, client):
        client.post("/api/datastores", json={"name": "nq"})
        resp = client.post("/api/datastores", json={"name": "nq"})
        assert resp.status_code == 400
        assert resp.json()["error"]["code"] == "duplicate_name"


class TestModelRoutes:
    def test_predict_happy_path(self, client):
        resp = client.post("/api/models/hash-embed-64/predict", json={"texts": ["cat"]})
        assert resp.status_code == 200
        assert len(resp.json()["output"]["embeddings"][0]) == 64

    def test_unknown_model_predict_404(self, client):
        resp = client.post("/api/models/unknown/predict", json={"texts": ["x"]})
        assert resp.status_code == 404

    def test_deploy_update_remove(self, client):
        spec = {"name": "emb-8", "task": "embedding", "impl": "builtin-stub", "params": {"dim": 8}}
        assert client.post("/api/models", json=spec).status_code == 201
        names = [w["name"] for w in client.get("/api/models").json()["models"]]
        assert "emb-8" in names
        spec["params"] = {"dim": 16}
        assert client.put("/api/models/emb-8", json=spec).status_code == 200
        assert client.delete("/api/models/emb-8").status_code == 200
        assert client.delete("/api/models/emb-8").status_code == 404


class TestSkillRoutes:
    def test_query_happy_path(self, client):
        skill = register_skill(client)
        resp = client.post(
            f"/api/skills/{skill['id']}/query",
            json={"query": "What size is the box?", "context": "There is a tiny purple box in the room."},
        )
        assert resp.status_code == 200
        body = resp.json()
        assert body["skill_id"] == skill["id"]
        assert body["answers"][0]["text"] == "purple"

    def test_private_skill_get_is_404_for_anonymous(self, client):
        skill = register_skill(client, visibility="private")
        resp = client.get(f"/api/skills/{skill['id']}")
        assert resp.status_code == 404  # not 403: existence stays hidden

    def test_anonymous_register_is_400(self, client):
        resp = client.post("/api/skills", json={"name": "x", "skill_type": "extractive"})
        assert resp.status_code == 400

    def test_empty_name_surfaces_400(self, client):
        resp = client.post(
            "/api/skills",
            json={"name": "", "skill_type": "extractive", "requires_context": True,
                  "hosting": "internal", "pipeline": {"reader_worker": "extract"}},
            headers=auth("tok-alice"),
        )
        assert resp.status_code == 400
        assert resp.json()["error"]["code"] == "validation_failed"

    def test_query_many_route(self, client):
        a = register_skill(client, name="a")
        b = register_skill(client, name="b")
        resp = client.post(
            "/api/query",
            json={"skills": [a["id"], b["id"]], "query": "What size is the box?",
                  "context": "There is a tiny purple box in the room."},
        )
        assert resp.status_code == 200
        results = resp.json()["results"]
        assert [r["skill_id"] for r in results] == [a["id"], b["id"]]
        assert all("output" in r for r in results)

    def test_tests_run_and_report_download(self, client):
        client.platform.deploy_worker(
            WorkerSpec(name="always", task="abstractive", params={"kind": "constant", "text": "tiny"})
        )
        skill = register_skill(
            client, name="const", skill_type="abstractive",
            pipeline={"reader_worker": "always"},
        )
        resp = client.post(f"/api/skills/{skill['id']}/tests/run", json={"suite_name": "core"})
        assert resp.status_code == 200
        report = resp.json()
        assert [t["failure_rate"] for t in report["tests"]] == ["0.00", "0.00"]

        summary = client.get(f"/api/skills/{skill['id']}/tests").json()
        assert "core" in summary["available_suites"]
        assert summary["reports"][0]["suite_name"] == "core"

        download = client.get(f"/api/skills/{skill['id']}/tests/report?suite=core")
        assert download.status_code == 200
        assert download.content == client.platform.report_bytes(skill["id"], "core")

    def test_report_before_run_is_404(self, client):
        skill = register_skill(client)
        assert client.get(f"/api/skills/{skill['id']}/tests/report?suite=core").status_code == 404


class TestAuthzMatrix:
    """Exhaustive {anonymous, owner, other} x {public, private} x {list, get, query, update}."""

    CASES = {
        ("public", "anonymous"): {"list": True, "get": 200, "query": 200, "update": 404},
        ("public", "owner"): {"list": True, "get": 200, "query": 200, "update": 200},
        ("public", "other"): {"list": True, "get": 200, "query": 200, "update": 404},
        ("private", "anonymous"): {"list": False, "get": 404, "query": 404, "update": 404},
        ("private", "owner"): {"list": True, "get": 200, "query": 200, "update": 200},
        ("private", "other"): {"list": False, "get": 404, "query": 404, "update": 404},
    }

    HEADERS = {
        "anonymous": {},
        "owner": auth("tok-alice"),
        "other": auth("tok-bob"),
    }

    @pytest.mark.parametrize("visibility", ["public", "private"])
    @pytest.mark.parametrize("who", ["anonymous", "owner", "other"])
    def test_matrix(self, client, visibility, who):
        skill = register_skill(client, visibility=visibility, name=f"{visibility}-skill")
        expected = self.CASES[(visibility, who)]
        headers = self.HEADERS[who]

        listed = [s["id"] for s in client.get("/api/skills", headers=headers).json()["skills"]]
        assert (skill["id"] in listed) == expected["list"]

        assert client.get(f"/api/skills/{skill['id']}", headers=headers).status_code == expected["get"]

        resp = client.post(
            f"/api/skills/{skill['id']}/query",
            json={"query": "What size is the box?", "context": "There is a tiny purple box in the room."},
            headers=headers,
        )
        assert resp.status_code == expected["query"]

        update_body = dict(skill)
        update_body["description"] = "changed"
        resp = client.put(f"/api/skills/{skill['id']}", json=update_body, headers=headers)
        assert resp.status_code == expected["update"]


class TestErrorEnvelope:
    def test_bad_token_is_401(self, client):
        resp = client.get("/api/skills", headers=auth("bogus"))
        assert resp.status_code == 401
        assert resp.json()["error"]["code"] == "invalid_token"

    def test_malformed_json_is_400(self, client):
        resp = client.post("/api/datastores", content=b"{not json", headers={"Content-Type": "application/json"})
        assert resp.status_code == 400

    def test_remote_failure_is_502(self, client):
        from conftest import dead_endpoint

        skill = register_skill(
            client, name="remote", skill_type="abstractive", hosting="remote",
            endpoint=dead_endpoint(), requires_context=False, pipeline=None,
        )
        resp = client.post(f"/api/skills/{skill['id']}/query", json={"query": "q"})
        assert resp.status_code == 502
        assert resp.json()["error"]["code"] == "remote_skill_error"

    FUZZ_BODIES = [
        b"", b"null", b"[]", b'"str"', b"{}", b'{"unexpected": [1,2,{}]}',
        b'{"query": 5}', b'{"name": {"nested": true}}', b"\xff\xfe\x00",
    ]

    ROUTES = [
        ("POST", "/api/datastores"),
        ("POST", "/api/datastores/nq/documents"),
        ("POST", "/api/datastores/nq/indices/sparse"),
        ("POST", "/api/datastores/nq/indices/dense"),
        ("POST", "/api/datastores/nq/search"),
        ("POST", "/api/models"),
        ("PUT", "/api/models/x"),
        ("POST", "/api/models/x/predict"),
        ("POST", "/api/skills"),
        ("PUT", "/api/skills/sk-1"),
        ("POST", "/api/skills/sk-1/query"),
        ("POST", "/api/query"),
        ("POST", "/api/skills/sk-1/tests/run"),
    ]

    def test_fuzz_malformed_bodies_map_to_4xx(self, client):
        for method, path in self.ROUTES:
            for body in self.FUZZ_BODIES:
                resp = client.request(
                    method, path, content=body, headers={"Content-Type": "application/json"}
                )
                assert resp.status_code in (400, 401, 404), (method, path, body, resp.status_code)
                assert "error" in resp.json()

    def test_read_replay_is_identical(self, client):
        register_skill(client, name="steady")
        first = client.get("/api/skills").content
        second = client.get("/api/skills").content
        assert first == second


class TestConfigBootstrap:
    def test_config_file_round_trip(self, tmp_path):
        from deskqa.gateway import bootstrap, load_config

        suite_path = tmp_path / "extra_suite.json"
        suite_path.write_text(json.dumps({
            "suite_name": "extra",
            "tests": [{"name": "t", "type": "MFT", "capability": "c",
                       "cases": [{"context": "ctx", "question": "q?", "expected": "a"}]}],
        }), encoding="utf-8")
        config_path = tmp_path / "server.json"
        config_path.write_text(json.dumps({
            "host": "127.0.0.1",
            "port": 9301,
            "tokens": {"tok-alice": "alice"},
            "data_dir": str(tmp_path / "data"),
            "suites": [str(suite_path)],
            "workers": [
                {"name": "hash-embed-64", "task": "embedding", "params": {"dim": 64}},
                {"name": "extract", "task": "extractive"},
            ],
            "skills": [
                {"name": "reader", "skill_type": "extractive", "requires_context": True,
                 "owner": "alice", "hosting": "internal", "pipeline": {"reader_worker": "extract"}},
            ],
        }), encoding="utf-8")

        config = load_config(str(config_path))
        assert (config.host, config.port) == ("127.0.0.1", 9301)
        platform = Platform.open(config.data_dir)
        bootstrap(platform, config)
        assert [w.name for w in platform.list_workers()] == ["extract", "hash-embed-64"]
        assert "extra" in platform.suites and "core" in platform.suites
        skills = platform.list_skills(Principal("alice"))
        assert [s.name for s in skills] == ["reader"]

        # bootstrap is idempotent: a second pass deploys nothing twice
        bootstrap(platform, config)
        assert len(platform.list_workers()) == 2
        assert len(platform.list_skills(Principal("alice"))) == 1
