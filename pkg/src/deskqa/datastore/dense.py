"""Dense retrieval over a datastore: embeddings come from a named hub worker.

The index remembers which embedder built it; searches embed the query
through the same worker. Documents are embedded as title + " " + text.
"""

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..errors import DimensionMismatch, IndexNotBuilt, ValidationFailed
from . import ivf
from .documents import Datastore, Document, RetrievalResult, index_text

EmbedFn = Callable[[list[str]], list[list[float]]]

DEFAULT_QUANTIZER = "sq8"
DEFAULT_METRIC = "inner-product"


def default_nlist(n_docs: int) -> int:
    """ceil(sqrt(N)) clamped to [1, N]."""
    return max(1, min(n_docs, math.ceil(math.sqrt(n_docs))))


@dataclass
class DenseIndex:
    embedder: str
    seed: int
    index: ivf.IvfIndex
    built_revision: int = 0

    @property
    def nlist(self) -> int:
        return self.index.nlist


def build_dense(
    docs: list[Document],
    embed: EmbedFn,
    embedder_name: str,
    dim: int,
    nlist: int,
    quantizer: str = DEFAULT_QUANTIZER,
    metric: str = DEFAULT_METRIC,
    seed: int = 0,
    built_revision: int = 0,
) -> DenseIndex:
    """Embed every document and build the IVF index over the vectors."""
    ordered = sorted(docs, key=lambda d: d.id)
    ids = [d.id for d in ordered]
    vectors = np.asarray(embed([index_text(d) for d in ordered]), dtype=np.float64)
    if vectors.ndim != 2 or vectors.shape[1] != dim:
        raise DimensionMismatch(
            f"embedder {embedder_name!r} produced dim {vectors.shape[-1]}, index wants {dim}"
        )
    index = ivf.build_ivf(ids, vectors, metric=metric, nlist=nlist, quantizer=quantizer, seed=seed)
    return DenseIndex(embedder=embedder_name, seed=seed, index=index, built_revision=built_revision)


def _embed_query(dense: DenseIndex, embed: EmbedFn, query: str) -> np.ndarray:
    vec = np.asarray(embed([query])[0], dtype=np.float64)
    if vec.shape != (dense.index.dim,):
        raise ValidationFailed(
            f"query embedding has dim {vec.shape}, index wants {dense.index.dim}"
        )
    return vec


def _attach(store: Datastore, pairs: list[tuple[str, float]]) -> list[RetrievalResult]:
    with store.lock:
        return [RetrievalResult(doc_id, score, store.docs[doc_id]) for doc_id, score in pairs]


def dense_search(
    store: Datastore, embed: EmbedFn, query: str, k: int, nprobe: int
) -> list[RetrievalResult]:
    """ANN top-k: embed the query, probe the nprobe nearest lists, score candidates."""
    dense = store.dense
    if dense is None:
        raise IndexNotBuilt(f"datastore {store.name!r} has no dense index")
    qvec = _embed_query(dense, embed, query)
    return _attach(store, ivf.search_ivf(dense.index, qvec, k, nprobe))


def exact_search(store: Datastore, embed: EmbedFn, query: str, k: int) -> list[RetrievalResult]:
    """Brute-force top-k over the full-precision vectors cached at build time."""
    dense = store.dense
    if dense is None:
        raise IndexNotBuilt(f"datastore {store.name!r} has no dense index")
    qvec = _embed_query(dense, embed, query)
    return _attach(store, ivf.search_exact(dense.index, qvec, k))
