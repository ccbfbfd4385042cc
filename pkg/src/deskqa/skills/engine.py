"""Skill execution: the retrieve-then-read pipeline, remote invocation, fan-out.

Internal skills run a pipeline against the datastore and model hub. Remote
skills receive the query request wire object over a single POST and must
answer with a query output wire object; anything else is a remote skill
error. Multi-skill queries fan out concurrently and report per-skill
failures without affecting the other entries.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Optional

import requests

from ..errors import (
    ContextRequired,
    DuplicateSkillIds,
    QAError,
    RemoteSkillError,
    TooFewOptions,
    ValidationFailed,
)
from .registry import Principal, Skill, SkillRegistry

REMOTE_TIMEOUT_S = 5.0

DEFAULT_TOPK = 5


@dataclass(frozen=True)
class QueryRequest:
    query: str
    context: str | None = None
    options: list[str] | None = None
    topk: int = DEFAULT_TOPK
    skill_args: dict[str, Any] = field(default_factory=dict)

    def to_wire(self) -> dict[str, Any]:
        wire: dict[str, Any] = {"query": self.query, "topk": self.topk, "skill_args": dict(self.skill_args)}
        if self.context is not None:
            wire["context"] = self.context
        if self.options is not None:
            wire["options"] = list(self.options)
        return wire

    @classmethod
    def from_wire(cls, data: dict[str, Any]) -> "QueryRequest":
        query = data.get("query")
        if not isinstance(query, str) or not query.strip():
            raise ValidationFailed("query must be a non-empty string")
        topk = data.get("topk", DEFAULT_TOPK)
        if not isinstance(topk, int) or topk < 1:
            raise ValidationFailed("topk must be an integer >= 1")
        context = data.get("context")
        if context is not None and not isinstance(context, str):
            raise ValidationFailed("context must be a string")
        options = data.get("options")
        if options is not None and (
            not isinstance(options, list) or not all(isinstance(o, str) for o in options)
        ):
            raise ValidationFailed("options must be a list of strings")
        skill_args = data.get("skill_args") or {}
        if not isinstance(skill_args, dict):
            raise ValidationFailed("skill_args must be a map")
        return cls(query=query, context=context, options=options, topk=topk, skill_args=skill_args)


@dataclass(frozen=True)
class Answer:
    text: str
    score: float
    span: tuple[int, int] | None = None
    doc_id: str | None = None
    context: str | None = None
    context_score: float | None = None

    def to_wire(self) -> dict[str, Any]:
        wire: dict[str, Any] = {"text": self.text, "score": self.score}
        if self.span is not None:
            wire["span"] = [self.span[0], self.span[1]]
        if self.doc_id is not None:
            wire["doc_id"] = self.doc_id
        if self.context is not None:
            wire["context"] = self.context
        if self.context_score is not None:
            wire["context_score"] = self.context_score
        return wire


@dataclass(frozen=True)
class QueryOutput:
    skill_id: str
    answers: list[Answer]

    def to_wire(self) -> dict[str, Any]:
        return {"skill_id": self.skill_id, "answers": [a.to_wire() for a in self.answers]}


def parse_options(request: QueryRequest) -> list[str]:
    """Multiple-choice options: explicit field wins, else newline-split context."""
    if request.options is not None:
        options = request.options
    elif request.context:
        options = [line.strip() for line in request.context.splitlines() if line.strip()]
    else:
        options = []
    if len(options) < 2:
        raise TooFewOptions(f"multiple-choice needs >= 2 options, got {len(options)}")
    return options


class SkillEngine:
    """Runs skills against a platform offering retrieval and worker prediction.

    The platform object must provide sparse_search / dense_search (returning
    retrieval results) and predict (the model hub router).
    """

    def __init__(self, registry: SkillRegistry, platform):
        self._registry = registry
        self._platform = platform

    def query_skill(self, skill_id: str, request: QueryRequest, principal: Principal) -> QueryOutput:
        skill = self._registry.get_visible(skill_id, principal)
        if not request.query or not request.query.strip():
            raise ValidationFailed("query must be non-empty")
        if skill.requires_context and not (request.context and request.context.strip()):
            raise ContextRequired(f"skill {skill_id!r} requires a context")
        if skill.hosting == "remote":
            return self._query_remote(skill, request)
        return self.run_pipeline(skill, request)

    def query_many(
        self, skill_ids: list[str], request: QueryRequest, principal: Principal
    ) -> list[tuple[str, QueryOutput | QAError]]:
        """Query each skill independently; entry order mirrors the input order."""
        if not skill_ids:
            raise ValidationFailed("need at least one skill id")
        if len(set(skill_ids)) != len(skill_ids):
            raise DuplicateSkillIds("skill ids must be unique")

        def one(skill_id: str) -> QueryOutput | QAError:
            try:
                return self.query_skill(skill_id, request, principal)
            except QAError as exc:
                return exc
            except Exception as exc:  # a crashing skill must not sink the batch
                return QAError(str(exc))

        with ThreadPoolExecutor(max_workers=len(skill_ids)) as pool:
            outputs = list(pool.map(one, skill_ids))
        return list(zip(skill_ids, outputs))

    # --- internal pipeline ---

    def run_pipeline(self, skill: Skill, request: QueryRequest) -> QueryOutput:
        pipeline = skill.pipeline
        if request.context and request.context.strip():
            contexts = [(None, request.context, None)]
        else:
            contexts = self._retrieve(skill, request)

        pooled: list[tuple[float, int, Answer]] = []
        for rank, (doc_id, text, retrieval_score) in enumerate(contexts):
            for answer in self._read(skill, request, text):
                pooled.append(
                    (
                        answer.score,
                        rank,
                        Answer(
                            text=answer.text,
                            score=answer.score,
                            span=answer.span,
                            doc_id=doc_id,
                            context=text,
                            context_score=retrieval_score,
                        ),
                    )
                )
        pooled.sort(key=lambda entry: (-entry[0], entry[1]))
        return QueryOutput(skill_id=skill.id, answers=[a for _, _, a in pooled[: request.topk]])

    def _retrieve(self, skill: Skill, request: QueryRequest) -> list[tuple[str, str, float]]:
        pipeline = skill.pipeline
        if pipeline.index == "sparse":
            results = self._platform.sparse_search(pipeline.datastore, request.query, pipeline.retrieve_k)
        else:
            nprobe = request.skill_args.get("nprobe")
            results = self._platform.dense_search(
                pipeline.datastore, request.query, pipeline.retrieve_k, nprobe=nprobe
            )
        return [(r.doc_id, r.document.text, r.score) for r in results]

    def _read(self, skill: Skill, request: QueryRequest, context: str) -> list[Answer]:
        pipeline = skill.pipeline
        worker = pipeline.reader_worker
        if skill.skill_type == "extractive":
            out = self._platform.predict(
                worker, {"question": request.query, "context": context, "topk": pipeline.reader_topk}
            )
            return [
                Answer(
                    text=s["text"],
                    score=float(s["score"]),
                    span=(int(s["start_char"]), int(s["end_char"])),
                )
                for s in out["spans"]
            ]
        if skill.skill_type == "categorical":
            out = self._platform.predict(worker, {"question": request.query, "context": context})
            scores = out["scores"]
            ranked = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))
            return [Answer(text=label, score=float(score)) for label, score in ranked]
        if skill.skill_type == "multiple-choice":
            options = parse_options(request)
            out = self._platform.predict(
                worker, {"question": request.query, "context": context, "options": options}
            )
            return [Answer(text=r["option"], score=float(r["score"])) for r in out["ranking"]]
        out = self._platform.predict(worker, {"question": request.query, "contexts": [context]})
        return [Answer(text=out["text"], score=float(out["score"]))]

    # --- remote skills ---

    def _query_remote(self, skill: Skill, request: QueryRequest) -> QueryOutput:
        try:
            resp = requests.post(skill.endpoint, json=request.to_wire(), timeout=REMOTE_TIMEOUT_S)
            resp.raise_for_status()
            body = resp.json()
        except (requests.RequestException, ValueError) as exc:
            raise RemoteSkillError(f"skill {skill.id!r} at {skill.endpoint}: {exc}") from exc
        return parse_remote_output(skill, body)


def parse_remote_output(skill: Skill, body: Any) -> QueryOutput:
    """Validate a remote skill's response shape; unknown fields are dropped."""
    if not isinstance(body, dict) or not isinstance(body.get("answers"), list):
        raise RemoteSkillError(f"skill {skill.id!r} returned no answers list")
    answers = []
    for i, raw in enumerate(body["answers"]):
        if not isinstance(raw, dict):
            raise RemoteSkillError(f"skill {skill.id!r}: answer {i} is not an object")
        text = raw.get("text")
        score = raw.get("score")
        if not isinstance(text, str) or not isinstance(score, (int, float)) or isinstance(score, bool):
            raise RemoteSkillError(f"skill {skill.id!r}: answer {i} needs text and numeric score")
        span = raw.get("span")
        if skill.skill_type == "extractive":
            if (
                not isinstance(span, (list, tuple))
                or len(span) != 2
                or not all(isinstance(v, int) and not isinstance(v, bool) for v in span)
            ):
                raise RemoteSkillError(f"skill {skill.id!r}: extractive answer {i} needs span [start, end]")
            span = (span[0], span[1])
        elif span is not None:
            raise RemoteSkillError(f"skill {skill.id!r}: span only allowed for extractive skills")
        doc_id = raw.get("doc_id")
        context = raw.get("context")
        context_score = raw.get("context_score")
        if doc_id is not None and not isinstance(doc_id, str):
            raise RemoteSkillError(f"skill {skill.id!r}: answer {i} doc_id must be a string")
        if context is not None and not isinstance(context, str):
            raise RemoteSkillError(f"skill {skill.id!r}: answer {i} context must be a string")
        if context_score is not None and (
            not isinstance(context_score, (int, float)) or isinstance(context_score, bool)
        ):
            raise RemoteSkillError(f"skill {skill.id!r}: answer {i} context_score must be numeric")
        answers.append(
            Answer(
                text=text,
                score=float(score),
                span=span if skill.skill_type == "extractive" else None,
                doc_id=doc_id,
                context=context,
                context_score=float(context_score) if context_score is not None else None,
            )
        )
    answers.sort(key=lambda a: -a.score)
    return QueryOutput(skill_id=skill.id, answers=answers)
