"""BM25 inverted index.

Scoring uses the nonnegative-IDF variant:

    score(D, Q) = sum over q in Q of
        ln(1 + (N - df + 0.5) / (df + 0.5))
        * tf * (k1 + 1) / (tf + k1 * (1 - b + b * |D| / avgdl))

The sum runs over the query token multiset, so a term repeated in the query
contributes once per occurrence. The IDF factor is strictly positive, which
guarantees that a document scores iff it shares at least one query term.
"""

import math
from collections import Counter
from dataclasses import dataclass, field

from ..errors import IndexNotBuilt, ValidationFailed
from ..text import tokenize
from .documents import Datastore, Document, RetrievalResult, index_text

DEFAULT_K1 = 1.2
DEFAULT_B = 0.75


@dataclass
class SparseIndex:
    k1: float
    b: float
    doc_count: int
    avg_doc_len: float
    doc_lengths: dict[str, int]
    doc_freq: dict[str, int]
    postings: dict[str, list[tuple[str, int]]]  # term -> [(doc_id, tf)], doc_id ascending
    built_revision: int = 0

    def idf(self, term: str) -> float:
        df = self.doc_freq.get(term, 0)
        if df == 0:
            return 0.0
        return math.log(1.0 + (self.doc_count - df + 0.5) / (df + 0.5))


def build_sparse(
    docs: list[Document],
    k1: float = DEFAULT_K1,
    b: float = DEFAULT_B,
    built_revision: int = 0,
) -> SparseIndex:
    """Build BM25 statistics over the documents (iterated in ascending id order)."""
    if k1 < 0:
        raise ValidationFailed(f"k1 must be >= 0, got {k1}")
    if not 0 <= b <= 1:
        raise ValidationFailed(f"b must be in [0, 1], got {b}")

    doc_lengths: dict[str, int] = {}
    doc_freq: dict[str, int] = {}
    postings: dict[str, list[tuple[str, int]]] = {}
    for doc in sorted(docs, key=lambda d: d.id):
        tokens = tokenize(index_text(doc))
        doc_lengths[doc.id] = len(tokens)
        for term, tf in sorted(Counter(tokens).items()):
            doc_freq[term] = doc_freq.get(term, 0) + 1
            postings.setdefault(term, []).append((doc.id, tf))

    n = len(doc_lengths)
    avg = sum(doc_lengths.values()) / n if n else 0.0
    return SparseIndex(
        k1=k1,
        b=b,
        doc_count=n,
        avg_doc_len=avg,
        doc_lengths=doc_lengths,
        doc_freq=doc_freq,
        postings=postings,
        built_revision=built_revision,
    )


def sparse_search(store: Datastore, query: str, k: int) -> list[RetrievalResult]:
    """Top-k BM25 matches, score descending, ties broken by ascending doc id."""
    if k < 1:
        raise ValidationFailed(f"k must be >= 1, got {k}")
    index = store.sparse
    if index is None:
        raise IndexNotBuilt(f"datastore {store.name!r} has no sparse index")

    scores: dict[str, float] = {}
    for term in tokenize(query):
        plist = index.postings.get(term)
        if not plist:
            continue
        idf = index.idf(term)
        for doc_id, tf in plist:
            dl = index.doc_lengths[doc_id]
            norm = tf + index.k1 * (1.0 - index.b + index.b * dl / index.avg_doc_len)
            scores[doc_id] = scores.get(doc_id, 0.0) + idf * tf * (index.k1 + 1.0) / norm

    ranked = sorted(scores.items(), key=lambda item: (-item[1], item[0]))[:k]
    with store.lock:
        return [RetrievalResult(doc_id, score, store.docs[doc_id]) for doc_id, score in ranked]
