"""Document collections with sparse (BM25) and dense (IVF + SQ8) retrieval."""

from .dense import DenseIndex, build_dense, default_nlist, dense_search, exact_search
from .documents import Datastore, DatastoreRegistry, Document, RetrievalResult, index_text
from .sparse import SparseIndex, build_sparse, sparse_search

__all__ = [
    "Datastore",
    "DatastoreRegistry",
    "Document",
    "RetrievalResult",
    "index_text",
    "SparseIndex",
    "build_sparse",
    "sparse_search",
    "DenseIndex",
    "build_dense",
    "default_nlist",
    "dense_search",
    "exact_search",
]
