"""Shared fixtures: a stocked platform and a local HTTP server for remote endpoints."""

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import pytest

from deskqa import Platform
from deskqa.datastore.documents import Document
from deskqa.modelhub import WorkerSpec
from deskqa.skills import PipelineConfig, Principal, Skill

ALICE = Principal("alice")
BOB = Principal("bob")


def stock_workers(platform: Platform) -> None:
    platform.deploy_worker(WorkerSpec(name="hash-embed-64", task="embedding", params={"dim": 64}))
    platform.deploy_worker(WorkerSpec(name="extract", task="extractive"))
    platform.deploy_worker(WorkerSpec(name="boolean", task="categorical"))
    platform.deploy_worker(WorkerSpec(name="choices", task="multiple-choice"))
    platform.deploy_worker(WorkerSpec(name="summarize", task="abstractive"))


@pytest.fixture
def platform():
    p = Platform()
    stock_workers(p)
    return p


@pytest.fixture
def tiny_corpus(platform):
    platform.create_datastore("tiny")
    platform.upsert_documents(
        "tiny",
        [
            Document("D1", "", "the cat sat"),
            Document("D2", "", "the dog barked"),
            Document("D3", "", "cat and dog"),
        ],
    )
    return platform


def reading_skill(platform, skill_type="extractive", reader="extract", owner=ALICE, **kwargs):
    """Register a context-requiring internal skill and return it."""
    skill = Skill(
        id="",
        name=kwargs.pop("name", f"{skill_type}-reader"),
        skill_type=skill_type,
        owner="",
        requires_context=True,
        pipeline=PipelineConfig(reader_worker=reader),
        **kwargs,
    )
    return platform.register_skill(skill, owner)


class _Handler(BaseHTTPRequestHandler):
    def log_message(self, *args):  # keep test output clean
        pass

    def do_POST(self):
        length = int(self.headers.get("Content-Length", 0))
        body = json.loads(self.rfile.read(length) or b"{}")
        route = self.server.routes.get(self.path)
        if route is None:
            self.send_response(404)
            self.end_headers()
            return
        status, payload = route(body)
        data = json.dumps(payload).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)


class LocalEndpoints:
    """Tiny HTTP server whose POST routes are plain callables body -> (status, payload)."""

    def __init__(self):
        self.server = ThreadingHTTPServer(("127.0.0.1", 0), _Handler)
        self.server.routes = {}
        self.thread = threading.Thread(target=self.server.serve_forever, daemon=True)
        self.thread.start()

    @property
    def base_url(self) -> str:
        host, port = self.server.server_address
        return f"http://{host}:{port}"

    def route(self, path, fn):
        self.server.routes[path] = fn
        return self.base_url + path

    def close(self):
        self.server.shutdown()
        self.server.server_close()


@pytest.fixture
def endpoints():
    eps = LocalEndpoints()
    yield eps
    eps.close()


def dead_endpoint() -> str:
    """A URL nothing listens on (bound then closed, so the port was free)."""
    import socket

    sock = socket.socket()
    sock.bind(("127.0.0.1", 0))
    port = sock.getsockname()[1]
    sock.close()
    return f"http://127.0.0.1:{port}/skill"
