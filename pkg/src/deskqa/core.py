"""The platform object: one process hosting datastores, workers, skills, suites.

Everything the gateway and the CLI expose routes through here. State lives
in memory; ``save``/``open`` persist it to a data directory in the canonical
file formats so separate CLI invocations see each other's work.
"""

import json
import os
from typing import Any, Optional

from . import behave
from .datastore import dense as dense_ops
from .datastore import serialize
from .datastore import sparse as sparse_ops
from .datastore.documents import Datastore, DatastoreRegistry, Document, RetrievalResult
from .errors import (
    DimensionMismatch,
    EmbedderUnavailable,
    EmptyDatastore,
    IndexNotBuilt,
    UnknownEmbedder,
    UnknownSuite,
    UnknownWorker,
)
from .modelhub import ModelHub, WorkerSpec
from .skills import Principal, QueryOutput, QueryRequest, Skill, SkillEngine, SkillRegistry


class Platform:
    def __init__(self, data_dir: str | None = None):
        self.data_dir = data_dir
        self.datastores = DatastoreRegistry()
        self.hub = ModelHub()
        self.skills = SkillRegistry()
        self.engine = SkillEngine(self.skills, self)
        self.suites: dict[str, behave.BehaviouralTestSuite] = {}
        self.reports: dict[tuple[str, str], bytes] = {}
        self.add_suite(behave.bundled_suite())

    # ------------------------------------------------------------------ datastores

    def create_datastore(self, name: str) -> Datastore:
        return self.datastores.create(name)

    def list_datastores(self) -> list[dict]:
        return [store.info() for store in self.datastores.list()]

    def upsert_documents(self, name: str, docs: list[Document]) -> int:
        return self.datastores.get(name).upsert(docs)

    def build_sparse_index(self, name: str, k1: float = sparse_ops.DEFAULT_K1, b: float = sparse_ops.DEFAULT_B):
        store = self.datastores.get(name)
        with store.lock:
            if not store.docs:
                raise EmptyDatastore(f"datastore {name!r} has no documents")
            index = sparse_ops.build_sparse(
                store.sorted_docs(), k1=k1, b=b, built_revision=store.revision
            )
            store.sparse = index
            return index

    def sparse_search(self, name: str, query: str, k: int) -> list[RetrievalResult]:
        return sparse_ops.sparse_search(self.datastores.get(name), query, k)

    def _embed_fn(self, worker: str):
        return lambda texts: self.hub.embed(worker, texts)

    def build_dense_index(
        self,
        name: str,
        embedder: str,
        dim: int,
        nlist: int | None = None,
        quantizer: str = dense_ops.DEFAULT_QUANTIZER,
        metric: str = dense_ops.DEFAULT_METRIC,
        seed: int = 0,
    ):
        store = self.datastores.get(name)
        try:
            declared = self.hub.embedding_dim(embedder)
        except UnknownWorker as exc:
            raise UnknownEmbedder(str(exc)) from exc
        if declared != dim:
            raise DimensionMismatch(f"embedder {embedder!r} has dim {declared}, index wants {dim}")
        with store.lock:
            if not store.docs:
                raise EmptyDatastore(f"datastore {name!r} has no documents")
            if nlist is None:
                nlist = dense_ops.default_nlist(len(store.docs))
            index = dense_ops.build_dense(
                store.sorted_docs(),
                embed=self._embed_fn(embedder),
                embedder_name=embedder,
                dim=dim,
                nlist=nlist,
                quantizer=quantizer,
                metric=metric,
                seed=seed,
                built_revision=store.revision,
            )
            store.dense = index
            return index

    def _dense_embedder(self, store: Datastore):
        if store.dense is None:
            raise IndexNotBuilt(f"datastore {store.name!r} has no dense index")
        name = store.dense.embedder
        try:
            self.hub.embedding_dim(name)
        except UnknownWorker as exc:
            raise EmbedderUnavailable(f"index embedder {name!r} is no longer deployed") from exc
        return self._embed_fn(name)

    def dense_search(
        self, name: str, query: str, k: int, nprobe: int | None = None
    ) -> list[RetrievalResult]:
        store = self.datastores.get(name)
        embed = self._dense_embedder(store)
        if nprobe is None:
            nprobe = store.dense.nlist
        return dense_ops.dense_search(store, embed, query, k, nprobe)

    def exact_search(self, name: str, query: str, k: int) -> list[RetrievalResult]:
        store = self.datastores.get(name)
        embed = self._dense_embedder(store)
        return dense_ops.exact_search(store, embed, query, k)

    # ------------------------------------------------------------------ workers

    def deploy_worker(self, spec: WorkerSpec) -> WorkerSpec:
        return self.hub.deploy(spec)

    def update_worker(self, spec: WorkerSpec) -> WorkerSpec:
        return self.hub.update(spec)

    def remove_worker(self, name: str) -> None:
        self.hub.remove(name)

    def list_workers(self) -> list[WorkerSpec]:
        return self.hub.list()

    def predict(self, worker: str, payload: dict) -> dict:
        return self.hub.predict(worker, payload)

    # ------------------------------------------------------------------ skills

    def register_skill(self, skill: Skill, principal: Principal) -> Skill:
        return self.skills.register(skill, principal)

    def update_skill(self, skill_id: str, skill: Skill, principal: Principal) -> Skill:
        return self.skills.update(skill_id, skill, principal)

    def remove_skill(self, skill_id: str, principal: Principal) -> None:
        self.skills.remove(skill_id, principal)
        self.reports = {key: v for key, v in self.reports.items() if key[0] != skill_id}

    def list_skills(self, principal: Principal) -> list[Skill]:
        return self.skills.list(principal)

    def get_skill(self, skill_id: str, principal: Principal) -> Skill:
        return self.skills.get_visible(skill_id, principal)

    def query_skill(self, skill_id: str, request: QueryRequest, principal: Principal) -> QueryOutput:
        return self.engine.query_skill(skill_id, request, principal)

    def query_many(self, skill_ids: list[str], request: QueryRequest, principal: Principal):
        return self.engine.query_many(skill_ids, request, principal)

    # ------------------------------------------------------------------ behavioural tests

    def add_suite(self, suite: behave.BehaviouralTestSuite) -> None:
        self.suites[suite.suite_name] = suite

    def load_suite_file(self, path: str) -> behave.BehaviouralTestSuite:
        suite = behave.load_suite_file(path)
        self.add_suite(suite)
        return suite

    def get_suite(self, suite_name: str) -> behave.BehaviouralTestSuite:
        suite = self.suites.get(suite_name)
        if suite is None:
            raise UnknownSuite(f"no suite named {suite_name!r}")
        return suite

    def run_suite(
        self, skill_id: str, suite: behave.BehaviouralTestSuite, principal: Principal
    ) -> behave.TestReport:
        """Run every case against the skill and remember the canonical report bytes."""
        self.skills.get_visible(skill_id, principal)  # visibility gate

        def ask(question: str, context: str) -> list[str]:
            request = QueryRequest(query=question, context=context)
            output = self.engine.query_skill(skill_id, request, principal)
            return [a.text for a in output.answers]

        report = behave.run_suite(suite, skill_id, ask)
        self.reports[(skill_id, suite.suite_name)] = behave.export_report(report)
        return report

    def run_suite_by_name(self, skill_id: str, suite_name: str, principal: Principal):
        return self.run_suite(skill_id, self.get_suite(suite_name), principal)

    def report_bytes(self, skill_id: str, suite_name: str) -> bytes:
        data = self.reports.get((skill_id, suite_name))
        if data is None:
            raise UnknownSuite(f"no report for skill {skill_id!r} and suite {suite_name!r}")
        return data

    def report_summaries(self, skill_id: str) -> list[dict]:
        rows = []
        for (sid, suite_name), data in sorted(self.reports.items()):
            if sid != skill_id:
                continue
            report = behave.parse_report(data)
            rows.append(
                {
                    "suite_name": suite_name,
                    "tests": [
                        {
                            "name": t.name,
                            "type": t.type,
                            "capability": t.capability,
                            "total": t.total,
                            "failures": t.failures,
                            "failure_rate": behave.format_rate(t.failures, t.total),
                        }
                        for t in report.tests
                    ],
                }
            )
        return rows

    # ------------------------------------------------------------------ persistence

    def save(self) -> None:
        if not self.data_dir:
            return
        os.makedirs(self.data_dir, exist_ok=True)
        stores_dir = os.path.join(self.data_dir, "datastores")
        os.makedirs(stores_dir, exist_ok=True)
        for store in self.datastores.list():
            d = os.path.join(stores_dir, store.name)
            os.makedirs(d, exist_ok=True)
            with store.lock:
                _write(os.path.join(d, "documents.jsonl"), serialize.dump_documents(store.sorted_docs()))
                meta = {"revision": store.revision}
                _write(os.path.join(d, "meta.json"), serialize.canonical_json_bytes(meta))
                sparse_path = os.path.join(d, "sparse.index.json")
                if store.sparse is not None:
                    _write(sparse_path, serialize.dump_sparse(store.sparse))
                elif os.path.exists(sparse_path):
                    os.remove(sparse_path)
                dense_path = os.path.join(d, "dense.index.json")
                if store.dense is not None:
                    _write(dense_path, serialize.dump_dense(store.dense))
                elif os.path.exists(dense_path):
                    os.remove(dense_path)

        _write(
            os.path.join(self.data_dir, "workers.json"),
            serialize.canonical_json_bytes([w.to_wire() for w in self.hub.list()]),
        )
        skills_state = {
            "next_id": self.skills._next_id,
            "skills": [s.to_wire() for s in sorted(self.skills._skills.values(), key=lambda s: s.id)],
        }
        _write(os.path.join(self.data_dir, "skills.json"), serialize.canonical_json_bytes(skills_state))

        reports_dir = os.path.join(self.data_dir, "reports")
        os.makedirs(reports_dir, exist_ok=True)
        for (skill_id, suite_name), data in self.reports.items():
            _write(os.path.join(reports_dir, f"{skill_id}__{suite_name}.json"), data)

    @classmethod
    def open(cls, data_dir: str) -> "Platform":
        platform = cls(data_dir=data_dir)
        if not os.path.isdir(data_dir):
            return platform

        stores_dir = os.path.join(data_dir, "datastores")
        if os.path.isdir(stores_dir):
            for name in sorted(os.listdir(stores_dir)):
                d = os.path.join(stores_dir, name)
                docs_path = os.path.join(d, "documents.jsonl")
                if not os.path.isfile(docs_path):
                    continue
                store = platform.datastores.create(name)
                docs = serialize.load_documents(_read(docs_path))
                if docs:
                    store.upsert(docs)
                meta_path = os.path.join(d, "meta.json")
                if os.path.isfile(meta_path):
                    store.revision = json.loads(_read(meta_path)).get("revision", store.revision)
                sparse_path = os.path.join(d, "sparse.index.json")
                if os.path.isfile(sparse_path):
                    store.sparse = serialize.load_sparse(_read(sparse_path))
                dense_path = os.path.join(d, "dense.index.json")
                if os.path.isfile(dense_path):
                    store.dense = serialize.load_dense(_read(dense_path))

        workers_path = os.path.join(data_dir, "workers.json")
        if os.path.isfile(workers_path):
            for raw in json.loads(_read(workers_path)):
                platform.hub.restore(WorkerSpec.from_wire(raw))

        skills_path = os.path.join(data_dir, "skills.json")
        if os.path.isfile(skills_path):
            state = json.loads(_read(skills_path))
            platform.skills._next_id = state.get("next_id", 1)
            for raw in state.get("skills", []):
                skill = skill_from_wire(raw)
                platform.skills._skills[skill.id] = skill

        reports_dir = os.path.join(data_dir, "reports")
        if os.path.isdir(reports_dir):
            for fname in sorted(os.listdir(reports_dir)):
                if not fname.endswith(".json") or "__" not in fname:
                    continue
                skill_id, suite_name = fname[:-5].split("__", 1)
                platform.reports[(skill_id, suite_name)] = _read(os.path.join(reports_dir, fname))
        return platform


def skill_from_wire(data: dict[str, Any]) -> Skill:
    from .skills import PipelineConfig

    pipeline = data.get("pipeline")
    return Skill(
        id=data.get("id", ""),
        name=data.get("name", ""),
        description=data.get("description", ""),
        skill_type=data.get("skill_type", ""),
        requires_context=bool(data.get("requires_context", False)),
        visibility=data.get("visibility", "public"),
        owner=data.get("owner", ""),
        hosting=data.get("hosting", "internal"),
        endpoint=data.get("endpoint"),
        pipeline=PipelineConfig.from_wire(pipeline) if isinstance(pipeline, dict) else None,
    )


def _write(path: str, data: bytes) -> None:
    with open(path, "wb") as fh:
        fh.write(data)


def _read(path: str) -> bytes:
    with open(path, "rb") as fh:
        return fh.read()
