"""Inverted-file ANN index with optional 8-bit scalar quantization.

Build: Lloyd k-means (seeded init from distinct points, at most 25 iterations
or centroid movement below 1e-6) partitions the vectors into nlist lists by
nearest centroid under squared Euclidean distance. Optionally each stored
vector is compressed to one byte per dimension by an affine map of that
dimension's [min, max] range onto 0..255.

Search: the query is compared against all centroids, the nprobe
geometrically nearest lists are scanned, and candidates are scored with the
index metric on reconstructed vectors — inner product, or negative Euclidean
distance so that larger is always better. Results order by score descending,
then ascending id. Full-precision vectors are kept alongside the lists so an
exact scan over the same corpus is always available as an oracle.
"""

from dataclasses import dataclass

import numpy as np

from ..errors import NlistTooLarge, NprobeOutOfRange, ValidationFailed

METRICS = ("inner-product", "euclidean")
QUANTIZERS = ("none", "sq8")

KMEANS_MAX_ITERS = 25
KMEANS_TOL = 1e-6


@dataclass
class IvfIndex:
    dim: int
    metric: str
    nlist: int
    centroids: np.ndarray            # (nlist, dim) float64
    quantizer: str
    sq_min: np.ndarray | None        # (dim,) float64, present iff sq8
    sq_max: np.ndarray | None
    list_ids: list[list[str]]        # per list, ids in build order
    list_data: list[np.ndarray]      # per list, uint8 codes (sq8) or float64 rows (none)
    ids: list[str]                   # all indexed ids, ascending
    vectors: np.ndarray              # (n, dim) float64 full-precision cache, aligned with ids

    @property
    def size(self) -> int:
        return len(self.ids)


def _squared_distances(vectors: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    # (n, k) matrix of squared L2 distances via the expansion trick
    cross = vectors @ centroids.T
    v_sq = np.sum(vectors * vectors, axis=1)[:, None]
    c_sq = np.sum(centroids * centroids, axis=1)[None, :]
    return v_sq + c_sq - 2.0 * cross


def kmeans(vectors: np.ndarray, k: int, seed: int) -> np.ndarray:
    """Seeded Lloyd iterations; returns (k, dim) centroids.

    Initialization samples k distinct vectors without replacement. Runs at
    most 25 iterations, stopping early once the largest centroid movement
    drops below 1e-6. A cluster that empties is re-seeded with the farthest
    member of the currently largest cluster.
    """
    n = len(vectors)
    if not 1 <= k <= n:
        raise ValidationFailed(f"k must be in [1, {n}], got {k}")
    rng = np.random.Generator(np.random.PCG64(seed))

    distinct = np.unique(vectors, axis=0)
    if len(distinct) >= k:
        picks = rng.choice(len(distinct), size=k, replace=False)
        centroids = distinct[np.sort(picks)].copy()
    else:
        extra = rng.choice(n, size=k - len(distinct), replace=True)
        centroids = np.concatenate([distinct, vectors[np.sort(extra)]]).copy()

    for _ in range(KMEANS_MAX_ITERS):
        labels = np.argmin(_squared_distances(vectors, centroids), axis=1)
        counts = np.bincount(labels, minlength=k)

        for empty in np.flatnonzero(counts == 0):
            largest = int(np.argmax(counts))
            members = np.flatnonzero(labels == largest)
            gaps = np.sum((vectors[members] - centroids[largest]) ** 2, axis=1)
            stray = members[int(np.argmax(gaps))]
            labels[stray] = empty
            counts[largest] -= 1
            counts[empty] += 1

        new_centroids = np.zeros_like(centroids)
        np.add.at(new_centroids, labels, vectors)
        new_centroids /= counts[:, None]

        movement = float(np.max(np.sqrt(np.sum((new_centroids - centroids) ** 2, axis=1))))
        centroids = new_centroids
        if movement < KMEANS_TOL:
            break
    return centroids


def sq8_train(vectors: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-dimension [min, max] over the indexed vectors."""
    return vectors.min(axis=0), vectors.max(axis=0)


def sq8_encode(vectors: np.ndarray, sq_min: np.ndarray, sq_max: np.ndarray) -> np.ndarray:
    width = sq_max - sq_min
    scale = np.divide(255.0, width, out=np.zeros_like(width), where=width > 0)
    codes = np.rint((vectors - sq_min) * scale)
    return np.clip(codes, 0, 255).astype(np.uint8)


def sq8_decode(codes: np.ndarray, sq_min: np.ndarray, sq_max: np.ndarray) -> np.ndarray:
    # zero-width dimensions decode to the minimum
    return sq_min + codes.astype(np.float64) * (sq_max - sq_min) / 255.0


def build_ivf(
    ids: list[str],
    vectors: np.ndarray,
    metric: str,
    nlist: int,
    quantizer: str,
    seed: int,
) -> IvfIndex:
    """Train the coarse quantizer and distribute every vector into one list."""
    if metric not in METRICS:
        raise ValidationFailed(f"metric must be one of {METRICS}, got {metric!r}")
    if quantizer not in QUANTIZERS:
        raise ValidationFailed(f"quantizer must be one of {QUANTIZERS}, got {quantizer!r}")
    n = len(ids)
    if n == 0:
        raise ValidationFailed("cannot build an index over zero vectors")
    if not 1 <= nlist <= n:
        raise NlistTooLarge(f"nlist must be in [1, {n}], got {nlist}")

    vectors = np.ascontiguousarray(vectors, dtype=np.float64)
    centroids = kmeans(vectors, nlist, seed)
    labels = np.argmin(_squared_distances(vectors, centroids), axis=1)

    sq_min = sq_max = None
    if quantizer == "sq8":
        sq_min, sq_max = sq8_train(vectors)

    list_ids: list[list[str]] = [[] for _ in range(nlist)]
    list_rows: list[list[int]] = [[] for _ in range(nlist)]
    for row, label in enumerate(labels):
        list_ids[label].append(ids[row])
        list_rows[label].append(row)

    list_data = []
    for rows in list_rows:
        block = vectors[rows] if rows else np.zeros((0, vectors.shape[1]))
        if quantizer == "sq8":
            block = sq8_encode(block, sq_min, sq_max)
        list_data.append(block)

    return IvfIndex(
        dim=vectors.shape[1],
        metric=metric,
        nlist=nlist,
        centroids=centroids,
        quantizer=quantizer,
        sq_min=sq_min,
        sq_max=sq_max,
        list_ids=list_ids,
        list_data=list_data,
        ids=list(ids),
        vectors=vectors,
    )


def _score(metric: str, candidates: np.ndarray, query: np.ndarray) -> np.ndarray:
    if metric == "inner-product":
        return candidates @ query
    return -np.sqrt(np.maximum(np.sum((candidates - query) ** 2, axis=1), 0.0))


def _rank(ids: list[str], scores: np.ndarray, k: int) -> list[tuple[str, float]]:
    order = np.lexsort((np.asarray(ids), -scores))[:k]
    return [(ids[i], float(scores[i])) for i in order]


def search_ivf(index: IvfIndex, query: np.ndarray, k: int, nprobe: int) -> list[tuple[str, float]]:
    """Scan the nprobe nearest lists; return top-k (id, score) pairs."""
    if not 1 <= nprobe <= index.nlist:
        raise NprobeOutOfRange(f"nprobe must be in [1, {index.nlist}], got {nprobe}")
    if k < 1:
        raise ValidationFailed(f"k must be >= 1, got {k}")
    query = np.asarray(query, dtype=np.float64)
    if query.shape != (index.dim,):
        raise ValidationFailed(f"query vector must have dim {index.dim}")

    centroid_d = _squared_distances(query[None, :], index.centroids)[0]
    probes = np.argsort(centroid_d, kind="stable")[:nprobe]

    cand_ids: list[str] = []
    blocks = []
    for p in probes:
        if not index.list_ids[p]:
            continue
        cand_ids.extend(index.list_ids[p])
        block = index.list_data[p]
        if index.quantizer == "sq8":
            block = sq8_decode(block, index.sq_min, index.sq_max)
        blocks.append(block)
    if not cand_ids:
        return []
    candidates = np.concatenate(blocks)
    return _rank(cand_ids, _score(index.metric, candidates, query), k)


def search_exact(index: IvfIndex, query: np.ndarray, k: int) -> list[tuple[str, float]]:
    """Brute-force top-k over the full-precision vectors cached at build time."""
    if k < 1:
        raise ValidationFailed(f"k must be >= 1, got {k}")
    query = np.asarray(query, dtype=np.float64)
    if query.shape != (index.dim,):
        raise ValidationFailed(f"query vector must have dim {index.dim}")
    return _rank(index.ids, _score(index.metric, index.vectors, query), k)


def search_exact_reconstructed(index: IvfIndex, query: np.ndarray, k: int) -> list[tuple[str, float]]:
    """Brute-force top-k over quantizer-reconstructed vectors (equals search_exact when quantizer=none)."""
    if index.quantizer == "none":
        return search_exact(index, query, k)
    query = np.asarray(query, dtype=np.float64)
    ids: list[str] = []
    blocks = []
    for p in range(index.nlist):
        if not index.list_ids[p]:
            continue
        ids.extend(index.list_ids[p])
        blocks.append(sq8_decode(index.list_data[p], index.sq_min, index.sq_max))
    return _rank(ids, _score(index.metric, np.concatenate(blocks), query), k)
