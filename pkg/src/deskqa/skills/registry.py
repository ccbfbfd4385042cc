"""Skill registry with per-owner visibility.

Private skills are indistinguishable from nonexistent ones for anybody but
their owner: lookups raise SkillNotFound rather than a permission error, and
listings simply omit them.
"""

import threading
from dataclasses import dataclass, field, replace
from typing import Any, Optional

from ..errors import NotOwner, SkillNotFound, ValidationFailed

SKILL_TYPES = ("extractive", "categorical", "multiple-choice", "abstractive")
VISIBILITIES = ("public", "private")
HOSTINGS = ("internal", "remote")

ANONYMOUS_USER = "anonymous"


@dataclass(frozen=True)
class Principal:
    user_id: str

    @property
    def is_anonymous(self) -> bool:
        return self.user_id == ANONYMOUS_USER


ANONYMOUS = Principal(ANONYMOUS_USER)


@dataclass(frozen=True)
class PipelineConfig:
    reader_worker: str
    reader_topk: int = 5
    datastore: str | None = None
    index: str | None = None      # "sparse" | "dense"
    retrieve_k: int = 3

    def to_wire(self) -> dict[str, Any]:
        wire: dict[str, Any] = {
            "reader_worker": self.reader_worker,
            "reader_topk": self.reader_topk,
            "retrieve_k": self.retrieve_k,
        }
        if self.datastore is not None:
            wire["datastore"] = self.datastore
        if self.index is not None:
            wire["index"] = self.index
        return wire

    @classmethod
    def from_wire(cls, data: dict[str, Any]) -> "PipelineConfig":
        return cls(
            reader_worker=data.get("reader_worker", ""),
            reader_topk=data.get("reader_topk", 5),
            datastore=data.get("datastore"),
            index=data.get("index"),
            retrieve_k=data.get("retrieve_k", 3),
        )


@dataclass(frozen=True)
class Skill:
    id: str
    name: str
    skill_type: str
    owner: str
    description: str = ""
    requires_context: bool = False
    visibility: str = "public"
    hosting: str = "internal"
    endpoint: str | None = None
    pipeline: PipelineConfig | None = None

    def to_wire(self) -> dict[str, Any]:
        wire: dict[str, Any] = {
            "id": self.id,
            "name": self.name,
            "description": self.description,
            "skill_type": self.skill_type,
            "requires_context": self.requires_context,
            "visibility": self.visibility,
            "owner": self.owner,
            "hosting": self.hosting,
        }
        if self.endpoint is not None:
            wire["endpoint"] = self.endpoint
        if self.pipeline is not None:
            wire["pipeline"] = self.pipeline.to_wire()
        return wire


def validate_skill(skill: Skill) -> None:
    if not skill.name or not skill.name.strip():
        raise ValidationFailed("skill name must be non-empty")
    if skill.skill_type not in SKILL_TYPES:
        raise ValidationFailed(f"skill_type must be one of {SKILL_TYPES}, got {skill.skill_type!r}")
    if skill.visibility not in VISIBILITIES:
        raise ValidationFailed(f"visibility must be one of {VISIBILITIES}")
    if skill.hosting not in HOSTINGS:
        raise ValidationFailed(f"hosting must be one of {HOSTINGS}")
    if skill.hosting == "remote":
        if not skill.endpoint:
            raise ValidationFailed("remote skills need a non-empty endpoint")
        return
    pipeline = skill.pipeline
    if pipeline is None or not pipeline.reader_worker:
        raise ValidationFailed("internal skills need a pipeline with a reader_worker")
    if pipeline.retrieve_k < 1 or pipeline.reader_topk < 1:
        raise ValidationFailed("retrieve_k and reader_topk must be >= 1")
    open_domain = not skill.requires_context
    has_retrieval = pipeline.datastore is not None and pipeline.index is not None
    if open_domain and not has_retrieval:
        raise ValidationFailed("open-domain skills need pipeline datastore and index")
    if not open_domain and (pipeline.datastore is not None or pipeline.index is not None):
        raise ValidationFailed("context-requiring skills must not configure retrieval")
    if has_retrieval and pipeline.index not in ("sparse", "dense"):
        raise ValidationFailed("pipeline index must be 'sparse' or 'dense'")


class SkillRegistry:
    def __init__(self):
        self._skills: dict[str, Skill] = {}
        self._next_id = 1
        self._lock = threading.RLock()

    def register(self, skill: Skill, principal: Principal) -> Skill:
        if principal.is_anonymous:
            raise ValidationFailed("skill registration requires an authenticated principal")
        with self._lock:
            assigned = replace(skill, id=f"sk-{self._next_id}", owner=principal.user_id)
            validate_skill(assigned)
            self._next_id += 1
            self._skills[assigned.id] = assigned
            return assigned

    def _get_raw(self, skill_id: str) -> Skill:
        skill = self._skills.get(skill_id)
        if skill is None:
            raise SkillNotFound(f"no skill {skill_id!r}")
        return skill

    def get_visible(self, skill_id: str, principal: Principal) -> Skill:
        with self._lock:
            skill = self._get_raw(skill_id)
            if skill.visibility == "private" and skill.owner != principal.user_id:
                raise SkillNotFound(f"no skill {skill_id!r}")
            return skill

    def update(self, skill_id: str, updated: Skill, principal: Principal) -> Skill:
        with self._lock:
            current = self.get_visible(skill_id, principal)
            if current.owner != principal.user_id:
                raise NotOwner(f"no skill {skill_id!r}")
            merged = replace(updated, id=current.id, owner=current.owner)
            validate_skill(merged)
            self._skills[skill_id] = merged
            return merged

    def remove(self, skill_id: str, principal: Principal) -> None:
        with self._lock:
            current = self.get_visible(skill_id, principal)
            if current.owner != principal.user_id:
                raise NotOwner(f"no skill {skill_id!r}")
            del self._skills[skill_id]

    def list(self, principal: Principal) -> list[Skill]:
        """Public skills plus the principal's own private ones, sorted by name."""
        with self._lock:
            visible = [
                s
                for s in self._skills.values()
                if s.visibility == "public" or s.owner == principal.user_id
            ]
            return sorted(visible, key=lambda s: (s.name, s.id))
