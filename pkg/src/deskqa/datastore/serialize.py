"""Canonical on-disk form for corpora and indexes.

Everything is JSON with sorted keys and compact separators; numeric arrays
are embedded as base64 of their little-endian bytes. Identical logical
content therefore produces identical bytes, which is what the build
determinism guarantee is stated against.
"""

import base64
import json
from typing import Any

import numpy as np

from ..errors import ParseError
from .dense import DenseIndex
from .documents import Document
from .ivf import IvfIndex
from .sparse import SparseIndex

FORMAT_VERSION = 1


def canonical_json_bytes(obj: Any) -> bytes:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, separators=(",", ":")).encode("utf-8")


def _pack_array(arr: np.ndarray, dtype: str) -> dict:
    data = np.ascontiguousarray(arr, dtype=np.dtype(dtype))
    return {
        "dtype": dtype,
        "shape": list(data.shape),
        "data": base64.b64encode(data.tobytes()).decode("ascii"),
    }


def _unpack_array(blob: dict) -> np.ndarray:
    raw = base64.b64decode(blob["data"])
    return np.frombuffer(raw, dtype=np.dtype(blob["dtype"])).reshape(blob["shape"]).copy()


def dump_documents(docs: list[Document]) -> bytes:
    """JSON-Lines, ascending id, one canonical object per line."""
    lines = [
        canonical_json_bytes({"id": d.id, "title": d.title, "text": d.text})
        for d in sorted(docs, key=lambda d: d.id)
    ]
    return b"\n".join(lines) + (b"\n" if lines else b"")


def load_documents(data: bytes) -> list[Document]:
    docs = []
    for lineno, line in enumerate(data.decode("utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(str(exc), line=lineno) from exc
        docs.append(Document(id=obj["id"], title=obj.get("title", ""), text=obj["text"]))
    return docs


def dump_sparse(index: SparseIndex) -> bytes:
    payload = {
        "format_version": FORMAT_VERSION,
        "kind": "sparse",
        "k1": index.k1,
        "b": index.b,
        "doc_count": index.doc_count,
        "avg_doc_len": index.avg_doc_len,
        "doc_lengths": index.doc_lengths,
        "doc_freq": index.doc_freq,
        "postings": {t: [[doc_id, tf] for doc_id, tf in plist] for t, plist in index.postings.items()},
        "built_revision": index.built_revision,
    }
    return canonical_json_bytes(payload)


def load_sparse(data: bytes) -> SparseIndex:
    obj = json.loads(data)
    return SparseIndex(
        k1=obj["k1"],
        b=obj["b"],
        doc_count=obj["doc_count"],
        avg_doc_len=obj["avg_doc_len"],
        doc_lengths=obj["doc_lengths"],
        doc_freq=obj["doc_freq"],
        postings={t: [(d, tf) for d, tf in plist] for t, plist in obj["postings"].items()},
        built_revision=obj.get("built_revision", 0),
    )


def dump_dense(dense: DenseIndex) -> bytes:
    idx = dense.index
    payload = {
        "format_version": FORMAT_VERSION,
        "kind": "dense",
        "embedder": dense.embedder,
        "seed": dense.seed,
        "built_revision": dense.built_revision,
        "dim": idx.dim,
        "metric": idx.metric,
        "nlist": idx.nlist,
        "quantizer": idx.quantizer,
        "centroids": _pack_array(idx.centroids, "<f8"),
        "sq_min": _pack_array(idx.sq_min, "<f8") if idx.sq_min is not None else None,
        "sq_max": _pack_array(idx.sq_max, "<f8") if idx.sq_max is not None else None,
        "lists": [
            {
                "ids": list_ids,
                "data": _pack_array(block, "<u1" if idx.quantizer == "sq8" else "<f8"),
            }
            for list_ids, block in zip(idx.list_ids, idx.list_data)
        ],
        "ids": idx.ids,
        "vectors": _pack_array(idx.vectors, "<f8"),
    }
    return canonical_json_bytes(payload)


def load_dense(data: bytes) -> DenseIndex:
    obj = json.loads(data)
    index = IvfIndex(
        dim=obj["dim"],
        metric=obj["metric"],
        nlist=obj["nlist"],
        centroids=_unpack_array(obj["centroids"]),
        quantizer=obj["quantizer"],
        sq_min=_unpack_array(obj["sq_min"]) if obj["sq_min"] is not None else None,
        sq_max=_unpack_array(obj["sq_max"]) if obj["sq_max"] is not None else None,
        list_ids=[entry["ids"] for entry in obj["lists"]],
        list_data=[_unpack_array(entry["data"]) for entry in obj["lists"]],
        ids=obj["ids"],
        vectors=_unpack_array(obj["vectors"]),
    )
    return DenseIndex(
        embedder=obj["embedder"],
        seed=obj["seed"],
        index=index,
        built_revision=obj.get("built_revision", 0),
    )
