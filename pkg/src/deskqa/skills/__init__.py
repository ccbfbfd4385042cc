"""Skill registry and execution engine."""

from .engine import Answer, QueryOutput, QueryRequest, SkillEngine, parse_options, parse_remote_output
from .registry import (
    ANONYMOUS,
    PipelineConfig,
    Principal,
    Skill,
    SkillRegistry,
    validate_skill,
)

__all__ = [
    "Answer",
    "QueryOutput",
    "QueryRequest",
    "SkillEngine",
    "parse_options",
    "parse_remote_output",
    "ANONYMOUS",
    "PipelineConfig",
    "Principal",
    "Skill",
    "SkillRegistry",
    "validate_skill",
]
