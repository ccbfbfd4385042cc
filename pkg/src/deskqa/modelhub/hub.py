"""Worker registry and prediction router.

A worker is a named endpoint for one task (embedding, extractive,
categorical, multiple-choice, abstractive). Built-in stub workers dispatch
to pure functions in-process; remote workers are proxied over a one-POST
wire protocol. Routing is total: every registered name resolves, every
unregistered name raises UnknownWorker.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Any, Callable

import requests

from ..errors import (
    DuplicateName,
    MissingEndpoint,
    PayloadMismatch,
    RemoteUnreachable,
    UnknownWorker,
    ValidationFailed,
)
from .embed import hash_embed
from .readers import read_abstractive, read_categorical, read_extractive, read_multichoice

TASKS = ("embedding", "extractive", "categorical", "multiple-choice", "abstractive")
IMPLS = ("builtin-stub", "remote")

REMOTE_TIMEOUT_S = 5.0

# Default built-in kind per task; WorkerSpec.params["kind"] may select another.
DEFAULT_KINDS = {
    "embedding": "feature-hash",
    "extractive": "proximity-span",
    "categorical": "negation-rule",
    "multiple-choice": "token-overlap",
    "abstractive": "best-sentence",
}

DEFAULT_EXTRACTIVE_TOPK = 10


@dataclass(frozen=True)
class WorkerSpec:
    """Registered worker: unique name, fixed task, builtin or remote implementation."""

    name: str
    task: str
    impl: str = "builtin-stub"
    endpoint: str | None = None
    params: dict[str, Any] = field(default_factory=dict)

    def to_wire(self) -> dict[str, Any]:
        wire: dict[str, Any] = {"name": self.name, "task": self.task, "impl": self.impl}
        if self.endpoint is not None:
            wire["endpoint"] = self.endpoint
        wire["params"] = dict(self.params)
        return wire

    @classmethod
    def from_wire(cls, data: dict[str, Any]) -> "WorkerSpec":
        if not isinstance(data.get("name"), str) or not data["name"]:
            raise ValidationFailed("worker name must be a non-empty string")
        params = data.get("params") or {}
        if not isinstance(params, dict):
            raise ValidationFailed("worker params must be a map")
        return cls(
            name=data["name"],
            task=data.get("task", ""),
            impl=data.get("impl", "builtin-stub"),
            endpoint=data.get("endpoint"),
            params=params,
        )


def _expect(payload: dict, key: str, kind: type, task: str) -> Any:
    value = payload.get(key)
    if not isinstance(value, kind):
        raise PayloadMismatch(f"{task} payload needs {key!r} of type {kind.__name__}")
    return value


def _builtin_embed(spec: WorkerSpec, payload: dict) -> dict:
    texts = _expect(payload, "texts", list, "embedding")
    if not all(isinstance(t, str) for t in texts):
        raise PayloadMismatch("embedding payload 'texts' must be a list of strings")
    return {"embeddings": hash_embed(texts, dim=int(spec.params["dim"]))}


def _builtin_extractive(spec: WorkerSpec, payload: dict) -> dict:
    question = _expect(payload, "question", str, "extractive")
    context = _expect(payload, "context", str, "extractive")
    topk = payload.get("topk", DEFAULT_EXTRACTIVE_TOPK)
    if not isinstance(topk, int):
        raise PayloadMismatch("extractive payload 'topk' must be an integer")
    spans = read_extractive(question, context, topk)
    return {
        "spans": [
            {"text": s.text, "start_char": s.start_char, "end_char": s.end_char, "score": s.score}
            for s in spans
        ]
    }


def _builtin_categorical(spec: WorkerSpec, payload: dict) -> dict:
    question = _expect(payload, "question", str, "categorical")
    context = _expect(payload, "context", str, "categorical")
    label, scores = read_categorical(question, context)
    return {"label": label, "scores": scores}


def _builtin_multichoice(spec: WorkerSpec, payload: dict) -> dict:
    question = _expect(payload, "question", str, "multiple-choice")
    context = _expect(payload, "context", str, "multiple-choice")
    options = _expect(payload, "options", list, "multiple-choice")
    if not all(isinstance(o, str) for o in options):
        raise PayloadMismatch("multiple-choice payload 'options' must be a list of strings")
    ranking = read_multichoice(question, context, options)
    return {"ranking": [{"option": o, "score": s} for o, s in ranking]}


def _builtin_abstractive(spec: WorkerSpec, payload: dict) -> dict:
    question = _expect(payload, "question", str, "abstractive")
    contexts = _expect(payload, "contexts", list, "abstractive")
    if not all(isinstance(c, str) for c in contexts):
        raise PayloadMismatch("abstractive payload 'contexts' must be a list of strings")
    text, score = read_abstractive(question, contexts)
    return {"text": text, "score": score}


def _builtin_constant(spec: WorkerSpec, payload: dict) -> dict:
    # baseline worker: same answer regardless of input; handy for harness checks
    return {"text": str(spec.params.get("text", "")), "score": 1.0}


BuiltinFn = Callable[[WorkerSpec, dict], dict]


class ModelHub:
    """Thread-safe registry of workers plus the predict router."""

    def __init__(self):
        self._workers: dict[str, WorkerSpec] = {}
        self._lock = threading.RLock()
        self._builtins: dict[tuple[str, str], BuiltinFn] = {
            ("embedding", "feature-hash"): _builtin_embed,
            ("extractive", "proximity-span"): _builtin_extractive,
            ("categorical", "negation-rule"): _builtin_categorical,
            ("multiple-choice", "token-overlap"): _builtin_multichoice,
            ("abstractive", "best-sentence"): _builtin_abstractive,
            ("abstractive", "constant"): _builtin_constant,
        }

    def register_builtin(self, task: str, kind: str, fn: BuiltinFn) -> None:
        """Add an alternative built-in implementation selectable via params["kind"]."""
        if task not in TASKS:
            raise ValidationFailed(f"unknown task {task!r}")
        with self._lock:
            self._builtins[(task, kind)] = fn

    def _validate(self, spec: WorkerSpec, check_kind: bool = True) -> None:
        if spec.task not in TASKS:
            raise ValidationFailed(f"unknown task {spec.task!r}")
        if spec.impl not in IMPLS:
            raise ValidationFailed(f"unknown impl {spec.impl!r}")
        if spec.impl == "remote":
            if not spec.endpoint:
                raise MissingEndpoint(f"remote worker {spec.name!r} needs an endpoint URL")
        else:
            kind = spec.params.get("kind", DEFAULT_KINDS[spec.task])
            if check_kind and (spec.task, kind) not in self._builtins:
                raise ValidationFailed(f"no builtin {spec.task} implementation of kind {kind!r}")
            if spec.task == "embedding":
                dim = spec.params.get("dim")
                if not isinstance(dim, int) or dim < 8:
                    raise ValidationFailed("embedding workers need integer params['dim'] >= 8")

    def deploy(self, spec: WorkerSpec) -> WorkerSpec:
        with self._lock:
            if spec.name in self._workers:
                raise DuplicateName(f"worker {spec.name!r} already deployed")
            self._validate(spec)
            self._workers[spec.name] = spec
            return spec

    def restore(self, spec: WorkerSpec) -> WorkerSpec:
        """Re-register a persisted worker; a custom builtin kind may be registered later."""
        with self._lock:
            if spec.name in self._workers:
                raise DuplicateName(f"worker {spec.name!r} already deployed")
            self._validate(spec, check_kind=False)
            self._workers[spec.name] = spec
            return spec

    def update(self, spec: WorkerSpec) -> WorkerSpec:
        with self._lock:
            current = self._workers.get(spec.name)
            if current is None:
                raise UnknownWorker(f"no worker named {spec.name!r}")
            if spec.task != current.task:
                raise ValidationFailed(
                    f"task is fixed for a worker's lifetime ({current.task!r} != {spec.task!r})"
                )
            self._validate(spec)
            self._workers[spec.name] = spec
            return spec

    def remove(self, name: str) -> None:
        with self._lock:
            if name not in self._workers:
                raise UnknownWorker(f"no worker named {name!r}")
            del self._workers[name]

    def list(self) -> list[WorkerSpec]:
        with self._lock:
            return sorted(self._workers.values(), key=lambda s: s.name)

    def get(self, name: str) -> WorkerSpec:
        with self._lock:
            spec = self._workers.get(name)
        if spec is None:
            raise UnknownWorker(f"no worker named {name!r}")
        return spec

    def predict(self, name: str, payload: dict) -> dict:
        """Route a prediction request to the named worker and pass its output through."""
        spec = self.get(name)
        if not isinstance(payload, dict):
            raise PayloadMismatch("payload must be a JSON object")
        if spec.impl == "builtin-stub":
            kind = spec.params.get("kind", DEFAULT_KINDS[spec.task])
            with self._lock:
                fn = self._builtins.get((spec.task, kind))
            if fn is None:
                raise ValidationFailed(
                    f"worker {spec.name!r} uses builtin kind {kind!r} which is not registered here"
                )
            return fn(spec, payload)
        return self._predict_remote(spec, payload)

    def _predict_remote(self, spec: WorkerSpec, payload: dict) -> dict:
        try:
            resp = requests.post(
                spec.endpoint,
                json={"task": spec.task, "payload": payload},
                timeout=REMOTE_TIMEOUT_S,
            )
            resp.raise_for_status()
            body = resp.json()
        except (requests.RequestException, ValueError) as exc:
            raise RemoteUnreachable(f"worker {spec.name!r} at {spec.endpoint}: {exc}") from exc
        if not isinstance(body, dict) or "output" not in body:
            raise RemoteUnreachable(f"worker {spec.name!r} returned no 'output' field")
        return body["output"]

    # Embedding conveniences used by the dense retrieval path.

    def embedding_dim(self, name: str) -> int:
        spec = self.get(name)
        if spec.task != "embedding":
            raise UnknownWorker(f"worker {name!r} is not an embedding worker")
        dim = spec.params.get("dim")
        if not isinstance(dim, int):
            raise ValidationFailed(f"embedding worker {name!r} does not declare a dim")
        return dim

    def embed(self, name: str, texts: list[str]) -> list[list[float]]:
        out = self.predict(name, {"texts": texts})
        embeddings = out.get("embeddings") if isinstance(out, dict) else None
        if not isinstance(embeddings, list) or len(embeddings) != len(texts):
            raise ValidationFailed(f"worker {name!r} returned a malformed embedding batch")
        return embeddings
