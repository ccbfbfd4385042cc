"""Server configuration: listen address, static tokens, data dir, bundled suites.

Tokens map bearer token -> user id and must be injective; "anonymous" is the
reserved unauthenticated principal and cannot be assigned to a token. The
optional workers/skills lists are deployed at startup so a config file can
bootstrap a complete installation.
"""

import json
from dataclasses import dataclass, field
from typing import Any

from ..errors import ValidationFailed
from ..skills.registry import ANONYMOUS_USER


@dataclass
class ServerConfig:
    host: str = "127.0.0.1"
    port: int = 8000
    tokens: dict[str, str] = field(default_factory=dict)
    data_dir: str | None = None
    suites: list[str] = field(default_factory=list)
    workers: list[dict[str, Any]] = field(default_factory=list)
    skills: list[dict[str, Any]] = field(default_factory=list)


def parse_config(data: dict[str, Any]) -> ServerConfig:
    tokens = data.get("tokens") or {}
    if not isinstance(tokens, dict) or not all(
        isinstance(k, str) and isinstance(v, str) for k, v in tokens.items()
    ):
        raise ValidationFailed("tokens must map token strings to user ids")
    users = list(tokens.values())
    if len(set(users)) != len(users):
        raise ValidationFailed("token map must be injective (one token per user)")
    if ANONYMOUS_USER in users:
        raise ValidationFailed(f"user id {ANONYMOUS_USER!r} is reserved")
    return ServerConfig(
        host=data.get("host", "127.0.0.1"),
        port=int(data.get("port", 8000)),
        tokens=tokens,
        data_dir=data.get("data_dir"),
        suites=list(data.get("suites") or []),
        workers=list(data.get("workers") or []),
        skills=list(data.get("skills") or []),
    )


def load_config(path: str) -> ServerConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(json.load(fh))
