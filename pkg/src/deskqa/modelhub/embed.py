"""Deterministic feature-hash text embedder.

Each token lands on one coordinate chosen by a 64-bit FNV-1a hash of its
UTF-8 bytes and contributes +1 or -1 depending on a second, independent
FNV-1a hash. The accumulated vector is L2-normalized. No model weights,
no randomness: identical text gives identical vectors on every platform.
"""

import math

from ..errors import ValidationFailed
from ..text import tokenize

FNV_PRIME = 0x100000001B3
# Two distinct offset bases: one hash picks the coordinate, the other the sign.
INDEX_OFFSET_BASIS = 0xCBF29CE484222325
SIGN_OFFSET_BASIS = 0x9E3779B97F4A7C15

_MASK64 = 0xFFFFFFFFFFFFFFFF


def fnv1a64(data: bytes, basis: int) -> int:
    """64-bit FNV-1a over raw bytes with a caller-chosen offset basis."""
    h = basis
    for byte in data:
        h ^= byte
        h = (h * FNV_PRIME) & _MASK64
    return h


def hash_embed(texts: list[str], dim: int) -> list[list[float]]:
    """Embed each text into a unit vector of size ``dim`` (``dim`` >= 8).

    Token t adds sign(h2(t)) at coordinate h1(t) mod dim, where the sign is
    +1 for an even sign-hash and -1 for an odd one. Texts with no tokens map
    to the zero vector (which is returned unnormalized).
    """
    if dim < 8:
        raise ValidationFailed(f"embedding dim must be >= 8, got {dim}")
    out = []
    for text in texts:
        vec = [0.0] * dim
        for token in tokenize(text):
            data = token.encode("utf-8")
            idx = fnv1a64(data, INDEX_OFFSET_BASIS) % dim
            sign = 1.0 if fnv1a64(data, SIGN_OFFSET_BASIS) % 2 == 0 else -1.0
            vec[idx] += sign
        norm = math.sqrt(sum(v * v for v in vec))
        if norm > 0.0:
            vec = [v / norm for v in vec]
        out.append(vec)
    return out
