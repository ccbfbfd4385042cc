"""Model workers: deterministic built-in stubs, remote workers, and the router."""

from .embed import INDEX_OFFSET_BASIS, SIGN_OFFSET_BASIS, fnv1a64, hash_embed
from .hub import DEFAULT_KINDS, ModelHub, WorkerSpec
from .readers import (
    Span,
    read_abstractive,
    read_categorical,
    read_extractive,
    read_multichoice,
)

__all__ = [
    "INDEX_OFFSET_BASIS",
    "SIGN_OFFSET_BASIS",
    "fnv1a64",
    "hash_embed",
    "DEFAULT_KINDS",
    "ModelHub",
    "WorkerSpec",
    "Span",
    "read_abstractive",
    "read_categorical",
    "read_extractive",
    "read_multichoice",
]
