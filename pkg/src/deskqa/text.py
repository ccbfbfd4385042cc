"""Canonical text handling: one tokenizer, one stopword list, one sentence splitter.

Every component that touches text (BM25 statistics, feature-hash embeddings,
reader stubs, behavioural-test normalization) goes through these functions so
that scores computed in one place can be re-derived exactly in another.
"""

import re
from typing import NamedTuple

# Alphanumeric runs; underscore and all punctuation are separators.
_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)

_SENTENCE_SPLIT_RE = re.compile(r"(?<=[.!?])\s+")

# Published stopword list used by all reader stubs and span eligibility rules.
STOPWORDS = frozenset({
    "a", "an", "the", "is", "are", "was", "were", "be",
    "what", "who", "when", "where", "which", "how", "why",
    "of", "in", "on", "at", "to", "and", "or",
    "did", "do", "does", "it", "this", "that",
})


class Token(NamedTuple):
    text: str       # lowercased
    start: int      # char offset into the original string
    end: int


def tokenize(text: str) -> list[str]:
    """Lowercase and split on any non-alphanumeric character."""
    return [m.group(0).lower() for m in _TOKEN_RE.finditer(text)]


def tokenize_with_offsets(text: str) -> list[Token]:
    """Like tokenize but keeps char offsets into the original (uncased) string."""
    return [Token(m.group(0).lower(), m.start(), m.end()) for m in _TOKEN_RE.finditer(text)]


def content_tokens(text: str) -> list[str]:
    """Tokens minus stopwords; the shared notion of 'content' across reader stubs."""
    return [t for t in tokenize(text) if t not in STOPWORDS]


def split_sentences(text: str) -> list[str]:
    """Split on sentence-ending punctuation followed by whitespace.

    A text without terminators is a single sentence. Pieces that are empty
    after stripping are dropped.
    """
    parts = _SENTENCE_SPLIT_RE.split(text.strip())
    return [p for p in (part.strip() for part in parts) if p]
