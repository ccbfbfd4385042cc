"""Named document collections and their retrieval indexes.

A datastore owns its documents plus at most one sparse and one dense index.
Indexes are immutable snapshots: upserts bump a revision counter and leave
existing indexes untouched (they become stale until rebuilt). Searches read
whichever index is currently attached, so a rebuild is an atomic swap.
"""

import re
import threading
from dataclasses import dataclass
from typing import TYPE_CHECKING, Optional

from ..errors import DuplicateName, EmptyText, InvalidName, UnknownDatastore

if TYPE_CHECKING:
    from .dense import DenseIndex
    from .sparse import SparseIndex

_NAME_RE = re.compile(r"^[a-z0-9_-]{1,64}$")


@dataclass(frozen=True)
class Document:
    """One unit of background knowledge: unique id, optional title, non-empty text."""

    id: str
    title: str
    text: str


@dataclass(frozen=True)
class RetrievalResult:
    doc_id: str
    score: float
    document: Document

    def to_wire(self) -> dict:
        return {
            "doc_id": self.doc_id,
            "score": self.score,
            "document": {"id": self.document.id, "title": self.document.title, "text": self.document.text},
        }


def index_text(doc: Document) -> str:
    """The single string indexed for a document: title + " " + text."""
    return doc.title + " " + doc.text


class Datastore:
    def __init__(self, name: str):
        self.name = name
        self.docs: dict[str, Document] = {}
        self.revision = 0
        self.sparse: Optional["SparseIndex"] = None
        self.dense: Optional["DenseIndex"] = None
        self.lock = threading.RLock()

    def upsert(self, docs: list[Document]) -> int:
        """Store documents, replacing by id. Returns the count of newly added ids."""
        for doc in docs:
            if not doc.text or not doc.text.strip():
                raise EmptyText(doc.id)
            if not doc.id:
                raise EmptyText("<missing id>")
        with self.lock:
            added = 0
            for doc in docs:
                if doc.id not in self.docs:
                    added += 1
                self.docs[doc.id] = doc
            self.revision += 1
            return added

    def sorted_docs(self) -> list[Document]:
        """Documents in ascending id order; the canonical iteration order for builds."""
        with self.lock:
            return [self.docs[k] for k in sorted(self.docs)]

    def info(self) -> dict:
        """Metadata snapshot, including staleness of each index."""
        with self.lock:
            out: dict = {"name": self.name, "documents": len(self.docs), "revision": self.revision}
            out["sparse"] = (
                {"built": True, "stale": self.sparse.built_revision < self.revision}
                if self.sparse
                else {"built": False, "stale": False}
            )
            out["dense"] = (
                {"built": True, "stale": self.dense.built_revision < self.revision}
                if self.dense
                else {"built": False, "stale": False}
            )
            return out


class DatastoreRegistry:
    def __init__(self):
        self._stores: dict[str, Datastore] = {}
        self._lock = threading.RLock()

    def create(self, name: str) -> Datastore:
        if not _NAME_RE.match(name or ""):
            raise InvalidName(f"datastore name must match [a-z0-9_-]{{1,64}}, got {name!r}")
        with self._lock:
            if name in self._stores:
                raise DuplicateName(f"datastore {name!r} already exists")
            store = Datastore(name)
            self._stores[name] = store
            return store

    def get(self, name: str) -> Datastore:
        with self._lock:
            store = self._stores.get(name)
        if store is None:
            raise UnknownDatastore(f"no datastore named {name!r}")
        return store

    def list(self) -> list[Datastore]:
        with self._lock:
            return [self._stores[k] for k in sorted(self._stores)]
