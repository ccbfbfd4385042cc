"""HTTP entry point: one process, path-routed to the owning modules.

Every response body is JSON; failures carry {"error": {"code", "message"}}
with the status taken from the raised error (validation 400, bad token 401,
unknown or hidden resources 404, remote failures 502, anything else 500).
"""

from typing import Any

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, Response

from ..core import Platform, skill_from_wire
from ..errors import QAError, ValidationFailed
from ..modelhub import WorkerSpec
from ..skills import Principal, QueryRequest
from .auth import authenticate
from .config import ServerConfig


def _error_response(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": {"code": code, "message": message}})


def create_app(platform: Platform, config: ServerConfig | None = None) -> FastAPI:
    config = config or ServerConfig()
    app = FastAPI(title="deskqa", docs_url=None, redoc_url=None, openapi_url=None)

    @app.exception_handler(QAError)
    async def qa_error_handler(request: Request, exc: QAError):
        return _error_response(exc.http_status, exc.code, exc.message)

    @app.exception_handler(RequestValidationError)
    async def validation_handler(request: Request, exc: RequestValidationError):
        return _error_response(400, "validation_failed", str(exc))

    @app.exception_handler(Exception)
    async def internal_handler(request: Request, exc: Exception):
        return _error_response(500, "internal", str(exc))

    def principal_of(request: Request) -> Principal:
        return authenticate(request.headers.get("authorization"), config.tokens)

    async def json_body(request: Request) -> dict[str, Any]:
        try:
            body = await request.json()
        except Exception as exc:
            raise ValidationFailed(f"request body must be JSON: {exc}") from exc
        if not isinstance(body, dict):
            raise ValidationFailed("request body must be a JSON object")
        return body

    def field_str(body: dict, key: str, required: bool = True, default: str | None = None) -> str | None:
        value = body.get(key, default)
        if value is None:
            if required:
                raise ValidationFailed(f"missing field {key!r}")
            return None
        if not isinstance(value, str):
            raise ValidationFailed(f"field {key!r} must be a string")
        return value

    def field_int(body: dict, key: str, required: bool = True, default: int | None = None) -> int | None:
        value = body.get(key, default)
        if value is None:
            if required:
                raise ValidationFailed(f"missing field {key!r}")
            return None
        if not isinstance(value, int) or isinstance(value, bool):
            raise ValidationFailed(f"field {key!r} must be an integer")
        return value

    def field_number(body: dict, key: str, default: float) -> float:
        value = body.get(key, default)
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ValidationFailed(f"field {key!r} must be a number")
        return float(value)

    # ------------------------------------------------------------ datastores

    @app.get("/api/datastores")
    async def list_datastores(request: Request):
        principal_of(request)
        return {"datastores": platform.list_datastores()}

    @app.post("/api/datastores")
    async def create_datastore(request: Request):
        principal_of(request)
        body = await json_body(request)
        store = platform.create_datastore(field_str(body, "name"))
        platform.save()
        return JSONResponse(status_code=201, content=store.info())

    @app.post("/api/datastores/{name}/documents")
    async def upsert_documents(name: str, request: Request):
        principal_of(request)
        body = await json_body(request)
        raw_docs = body.get("documents")
        if not isinstance(raw_docs, list):
            raise ValidationFailed("field 'documents' must be a list")
        from ..datastore.documents import Document

        docs = []
        for i, raw in enumerate(raw_docs):
            if not isinstance(raw, dict) or not isinstance(raw.get("text"), str):
                raise ValidationFailed(f"document {i} must be an object with a 'text' string")
            doc_id = raw.get("id")
            if doc_id is None:
                doc_id = f"doc-{i + 1}"
            if not isinstance(doc_id, str):
                raise ValidationFailed(f"document {i} id must be a string")
            docs.append(Document(id=doc_id, title=str(raw.get("title", "")), text=raw["text"]))
        added = platform.upsert_documents(name, docs)
        platform.save()
        return {"added": added, "datastore": platform.datastores.get(name).info()}

    @app.post("/api/datastores/{name}/indices/{index_type}")
    async def build_index(name: str, index_type: str, request: Request):
        principal_of(request)
        body = await json_body(request)
        if index_type == "sparse":
            index = platform.build_sparse_index(
                name,
                k1=field_number(body, "k1", 1.2),
                b=field_number(body, "b", 0.75),
            )
            platform.save()
            return {"built": "sparse", "doc_count": index.doc_count, "avg_doc_len": index.avg_doc_len}
        if index_type == "dense":
            index = platform.build_dense_index(
                name,
                embedder=field_str(body, "embedder"),
                dim=field_int(body, "dim"),
                nlist=field_int(body, "nlist", required=False),
                quantizer=field_str(body, "quantizer", required=False, default="sq8"),
                metric=field_str(body, "metric", required=False, default="inner-product"),
                seed=field_int(body, "seed", required=False, default=0) or 0,
            )
            platform.save()
            return {
                "built": "dense",
                "nlist": index.nlist,
                "quantizer": index.index.quantizer,
                "metric": index.index.metric,
                "size": index.index.size,
            }
        raise ValidationFailed("index type must be 'sparse' or 'dense'")

    @app.post("/api/datastores/{name}/search")
    async def search_datastore(name: str, request: Request):
        principal_of(request)
        body = await json_body(request)
        index = field_str(body, "index")
        query = field_str(body, "query")
        k = field_int(body, "k", required=False, default=10)
        if k < 1:
            raise ValidationFailed("field 'k' must be >= 1")
        if index == "sparse":
            results = platform.sparse_search(name, query, k)
        elif index == "dense":
            results = platform.dense_search(name, query, k, nprobe=field_int(body, "nprobe", required=False))
        elif index == "exact":
            results = platform.exact_search(name, query, k)
        else:
            raise ValidationFailed("field 'index' must be 'sparse', 'dense' or 'exact'")
        return {"results": [r.to_wire() for r in results]}

    # ------------------------------------------------------------ models

    @app.get("/api/models")
    async def list_models(request: Request):
        principal_of(request)
        return {"models": [w.to_wire() for w in platform.list_workers()]}

    @app.post("/api/models")
    async def deploy_model(request: Request):
        principal_of(request)
        body = await json_body(request)
        spec = platform.deploy_worker(WorkerSpec.from_wire(body))
        platform.save()
        return JSONResponse(status_code=201, content=spec.to_wire())

    @app.put("/api/models/{name}")
    async def update_model(name: str, request: Request):
        principal_of(request)
        body = await json_body(request)
        body["name"] = name
        spec = platform.update_worker(WorkerSpec.from_wire(body))
        platform.save()
        return spec.to_wire()

    @app.delete("/api/models/{name}")
    async def remove_model(name: str, request: Request):
        principal_of(request)
        platform.remove_worker(name)
        platform.save()
        return {"removed": name}

    @app.post("/api/models/{name}/predict")
    async def predict(name: str, request: Request):
        principal_of(request)
        body = await json_body(request)
        return {"output": platform.predict(name, body)}

    # ------------------------------------------------------------ skills

    @app.get("/api/skills")
    async def list_skills(request: Request):
        principal = principal_of(request)
        return {"skills": [s.to_wire() for s in platform.list_skills(principal)]}

    @app.post("/api/skills")
    async def register_skill(request: Request):
        principal = principal_of(request)
        body = await json_body(request)
        skill = platform.register_skill(skill_from_wire(body), principal)
        platform.save()
        return JSONResponse(status_code=201, content=skill.to_wire())

    @app.get("/api/skills/{skill_id}")
    async def get_skill(skill_id: str, request: Request):
        principal = principal_of(request)
        return platform.get_skill(skill_id, principal).to_wire()

    @app.put("/api/skills/{skill_id}")
    async def update_skill(skill_id: str, request: Request):
        principal = principal_of(request)
        body = await json_body(request)
        skill = platform.update_skill(skill_id, skill_from_wire(body), principal)
        platform.save()
        return skill.to_wire()

    @app.delete("/api/skills/{skill_id}")
    async def remove_skill(skill_id: str, request: Request):
        principal = principal_of(request)
        platform.remove_skill(skill_id, principal)
        platform.save()
        return {"removed": skill_id}

    @app.post("/api/skills/{skill_id}/query")
    async def query_skill(skill_id: str, request: Request):
        principal = principal_of(request)
        body = await json_body(request)
        output = platform.query_skill(skill_id, QueryRequest.from_wire(body), principal)
        return output.to_wire()

    @app.post("/api/query")
    async def query_many(request: Request):
        principal = principal_of(request)
        body = await json_body(request)
        skill_ids = body.get("skills")
        if not isinstance(skill_ids, list) or not all(isinstance(s, str) for s in skill_ids):
            raise ValidationFailed("field 'skills' must be a list of skill ids")
        query_request = QueryRequest.from_wire({k: v for k, v in body.items() if k != "skills"})
        entries = platform.query_many(skill_ids, query_request, principal)
        results = []
        for skill_id, outcome in entries:
            if isinstance(outcome, QAError):
                results.append(
                    {"skill_id": skill_id, "error": {"code": outcome.code, "message": outcome.message}}
                )
            else:
                results.append({"skill_id": skill_id, "output": outcome.to_wire()})
        return {"results": results}

    # ------------------------------------------------------------ behavioural tests

    @app.get("/api/skills/{skill_id}/tests")
    async def test_summary(skill_id: str, request: Request):
        principal = principal_of(request)
        platform.get_skill(skill_id, principal)
        return {
            "skill_id": skill_id,
            "available_suites": sorted(platform.suites),
            "reports": platform.report_summaries(skill_id),
        }

    @app.post("/api/skills/{skill_id}/tests/run")
    async def run_tests(skill_id: str, request: Request):
        principal = principal_of(request)
        body = await json_body(request)
        suite_name = field_str(body, "suite_name")
        platform.run_suite_by_name(skill_id, suite_name, principal)
        platform.save()
        return Response(content=platform.report_bytes(skill_id, suite_name), media_type="application/json")

    @app.get("/api/skills/{skill_id}/tests/report")
    async def download_report(skill_id: str, request: Request):
        principal = principal_of(request)
        platform.get_skill(skill_id, principal)
        suite_name = request.query_params.get("suite", "core")
        data = platform.report_bytes(skill_id, suite_name)
        return Response(
            content=data,
            media_type="application/json",
            headers={"Content-Disposition": f'attachment; filename="{skill_id}__{suite_name}.json"'},
        )

    return app


def bootstrap(platform: Platform, config: ServerConfig) -> None:
    """Deploy config-declared workers, skills, and suites, skipping ones already present."""
    existing_workers = {w.name for w in platform.list_workers()}
    for raw in config.workers:
        spec = WorkerSpec.from_wire(raw)
        if spec.name not in existing_workers:
            platform.deploy_worker(spec)
    existing_skill_names = {s.name for s in platform.skills._skills.values()}
    for raw in config.skills:
        skill = skill_from_wire(raw)
        if skill.name in existing_skill_names:
            continue
        owner = raw.get("owner")
        if not owner:
            raise ValidationFailed("config skills need an 'owner'")
        platform.register_skill(skill, Principal(owner))
    for path in config.suites:
        platform.load_suite_file(path)
