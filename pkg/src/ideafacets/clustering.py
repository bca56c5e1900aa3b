"""Concept discovery: k-means++ over span vectors with silhouette-knee K
selection.

Purpose and mechanism spans are clustered separately; each cluster
becomes a concept node titled by the member surfaces nearest its
centroid.  Distances are Euclidean, which on unit-norm inputs orders
pairs identically to cosine distance.  All randomness flows through an
explicit seed, so identical inputs give identical concepts.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .corpus import Corpus
from .embeddings import SpanVector

DEFAULT_K_GRID = tuple(range(25, 401, 25))


class ClusteringError(ValueError):
    """Infeasible clustering request."""


@dataclass(frozen=True)
class ClusteringConfig:
    k: int | None = None  # None = AUTO (grid search)
    k_grid: tuple[int, ...] = DEFAULT_K_GRID
    seed: int = 0
    max_iters: int = 100
    tol: float = 1e-4
    silhouette_sample: int | None = 2000
    selection: str = "knee"  # or "max"
    knee_threshold: float = 0.05
    title_count: int = 3

    def __post_init__(self):
        if self.tol <= 0:
            raise ClusteringError("tol must be positive")
        if list(self.k_grid) != sorted(self.k_grid):
            raise ClusteringError("k_grid must be sorted ascending")
        if self.selection not in ("knee", "max"):
            raise ClusteringError(f"unknown selection mode {self.selection!r}")


@dataclass(frozen=True)
class KMeansResult:
    assignments: np.ndarray  # (n,) int
    centroids: np.ndarray  # (k, dim)
    inertia: float
    iterations: int


def _squared_distances(points: np.ndarray, centers: np.ndarray) -> np.ndarray:
    # (n, k) squared Euclidean distances, clipped against negative round-off.
    sq = (
        np.sum(points**2, axis=1)[:, None]
        - 2.0 * points @ centers.T
        + np.sum(centers**2, axis=1)[None, :]
    )
    return np.maximum(sq, 0.0)


def _seed_centroids(vectors: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = vectors.shape[0]
    centers = np.empty((k, vectors.shape[1]))
    first = int(rng.integers(n))
    centers[0] = vectors[first]
    d2 = np.sum((vectors - centers[0]) ** 2, axis=1)
    for i in range(1, k):
        total = float(d2.sum())
        if total == 0.0:
            raise ClusteringError("k exceeds the number of distinct points")
        probs = d2 / total
        nxt = int(rng.choice(n, p=probs))
        centers[i] = vectors[nxt]
        d2 = np.minimum(d2, np.sum((vectors - centers[i]) ** 2, axis=1))
    return centers


def kmeans_pp(
    vectors: np.ndarray,
    k: int,
    seed: int,
    max_iters: int = 100,
    tol: float = 1e-4,
) -> KMeansResult:
    """Seeded k-means++ with Lloyd iterations.

    Empty clusters are re-seeded to the point farthest from its assigned
    centroid.  Within-cluster inertia is asserted non-increasing across
    iterations (Lloyd monotonicity).
    """
    vectors = np.asarray(vectors, dtype=np.float64)
    n = vectors.shape[0]
    distinct = np.unique(vectors, axis=0).shape[0]
    if k < 1 or k > distinct:
        raise ClusteringError(f"k={k} outside [1, {distinct}] distinct points")
    rng = np.random.default_rng(seed)
    centroids = _seed_centroids(vectors, k, rng)
    prev_inertia = np.inf
    assignments = np.zeros(n, dtype=int)
    iterations = 0
    for iterations in range(1, max_iters + 1):
        sq = _squared_distances(vectors, centroids)
        assignments = np.argmin(sq, axis=1)
        assignments, sq = _fix_empty_clusters(vectors, centroids, assignments, sq, k)
        inertia = float(sq[np.arange(n), assignments].sum())
        assert inertia <= prev_inertia + 1e-9 * (1.0 + prev_inertia if np.isfinite(prev_inertia) else 1.0)
        prev_inertia = inertia
        new_centroids = np.vstack(
            [vectors[assignments == c].mean(axis=0) for c in range(k)]
        )
        shift = float(np.max(np.linalg.norm(new_centroids - centroids, axis=1)))
        centroids = new_centroids
        if shift < tol:
            break
    sq = _squared_distances(vectors, centroids)
    assignments = np.argmin(sq, axis=1)
    assignments, sq = _fix_empty_clusters(vectors, centroids, assignments, sq, k)
    centroids = np.vstack([vectors[assignments == c].mean(axis=0) for c in range(k)])
    inertia = float(
        np.sum((vectors - centroids[assignments]) ** 2)
    )
    return KMeansResult(assignments=assignments, centroids=centroids, inertia=inertia, iterations=iterations)


def _fix_empty_clusters(
    vectors: np.ndarray,
    centroids: np.ndarray,
    assignments: np.ndarray,
    sq: np.ndarray,
    k: int,
) -> tuple[np.ndarray, np.ndarray]:
    counts = np.bincount(assignments, minlength=k)
    taken: set[int] = set()
    while np.any(counts == 0):
        empty = int(np.argmin(counts))
        own = sq[np.arange(len(assignments)), assignments].copy()
        for idx in taken:
            own[idx] = -1.0
        farthest = int(np.argmax(own))
        taken.add(farthest)
        centroids[empty] = vectors[farthest]
        sq[:, empty] = np.sum((vectors - centroids[empty]) ** 2, axis=1)
        assignments = np.argmin(sq, axis=1)
        counts = np.bincount(assignments, minlength=k)
    return assignments, sq


def silhouette(
    vectors: np.ndarray,
    assignments: np.ndarray,
    sample_size: int | None = None,
    seed: int = 0,
) -> float:
    """Mean silhouette with Euclidean distance.

    Points in singleton clusters contribute 0.  When the input exceeds
    ``sample_size``, a seeded uniform subsample is scored instead.
    """
    vectors = np.asarray(vectors, dtype=np.float64)
    assignments = np.asarray(assignments)
    if len(np.unique(assignments)) < 2:
        raise ClusteringError("silhouette requires at least 2 clusters")
    n = vectors.shape[0]
    if sample_size is not None and n > sample_size:
        rng = np.random.default_rng(seed)
        keep = np.sort(rng.choice(n, size=sample_size, replace=False))
        vectors, assignments = vectors[keep], assignments[keep]
        if len(np.unique(assignments)) < 2:
            raise ClusteringError("subsample collapsed to a single cluster; raise sample_size")
        n = sample_size
    dist = np.sqrt(_squared_distances(vectors, vectors))
    labels = np.unique(assignments)
    scores = np.zeros(n)
    for i in range(n):
        own = assignments[i]
        own_mask = assignments == own
        own_count = int(own_mask.sum())
        if own_count <= 1:
            scores[i] = 0.0
            continue
        a = float(dist[i, own_mask].sum()) / (own_count - 1)
        b = min(
            float(dist[i, assignments == other].mean())
            for other in labels
            if other != own
        )
        denom = max(a, b)
        scores[i] = (b - a) / denom if denom > 0 else 0.0
    return float(scores.mean())


@dataclass(frozen=True)
class KSelection:
    k: int
    trace: tuple[tuple[int, float], ...]  # (K, mean silhouette) per candidate
    no_knee: bool = False

    def as_dict(self) -> dict:
        return {"k": self.k, "trace": [list(t) for t in self.trace], "no_knee": self.no_knee}


def select_k(vectors: np.ndarray, config: ClusteringConfig) -> KSelection:
    """Choose K on a candidate grid by the knee of the silhouette curve.

    The knee is the interior grid point maximizing the drop in marginal
    silhouette gain, 2*s(K) - s(K-) - s(K+).  A flat curve (max drop
    below ``knee_threshold``) is flagged ``no_knee``; in ``max``
    selection mode the silhouette argmax is returned instead.
    """
    vectors = np.asarray(vectors, dtype=np.float64)
    distinct = np.unique(vectors, axis=0).shape[0]
    feasible = [k for k in config.k_grid if 2 <= k <= distinct]
    if not feasible:
        raise ClusteringError(
            f"no feasible K in grid {list(config.k_grid)} for {distinct} distinct points"
        )
    trace = []
    for k in feasible:
        result = kmeans_pp(vectors, k, config.seed, config.max_iters, config.tol)
        score = silhouette(
            vectors, result.assignments, sample_size=config.silhouette_sample, seed=config.seed
        )
        trace.append((k, score))
    scores = [s for _, s in trace]
    if config.selection == "max" or len(feasible) < 3:
        best = int(np.argmax(scores))
        return KSelection(k=feasible[best], trace=tuple(trace), no_knee=len(feasible) < 3)
    strengths = [
        2.0 * scores[i] - scores[i - 1] - scores[i + 1] for i in range(1, len(scores) - 1)
    ]
    best_interior = int(np.argmax(strengths))
    chosen = feasible[best_interior + 1]
    no_knee = strengths[best_interior] < config.knee_threshold
    return KSelection(k=chosen, trace=tuple(trace), no_knee=no_knee)


@dataclass(frozen=True)
class Concept:
    """A cluster of same-kind spans acting as a node of the concept graph."""

    id: str
    kind: str
    member_span_ids: tuple[str, ...]
    centroid: np.ndarray
    title_spans: tuple[str, ...]

    @property
    def size(self) -> int:
        return len(self.member_span_ids)


@dataclass(frozen=True)
class ConceptBuildResult:
    concepts: tuple[Concept, ...]
    selection: KSelection | None
    warnings: tuple[str, ...] = field(default_factory=tuple)

    @property
    def assignments(self) -> dict[str, str]:
        out = {}
        for concept in self.concepts:
            for span_id in concept.member_span_ids:
                out[span_id] = concept.id
        return out


def build_concepts(
    corpus: Corpus,
    span_vectors: dict[str, SpanVector],
    kind: str,
    config: ClusteringConfig,
) -> ConceptBuildResult:
    """Cluster all spans of one kind into concepts.

    OOV spans participate with their zero vectors so the concepts
    partition the full span set.  Titles are the ``title_count`` member
    surfaces nearest the centroid by cosine, deduplicated by surface.
    """
    pairs = corpus.spans_with_ids(kind)
    if not pairs:
        raise ClusteringError(f"corpus has no {kind} spans")
    span_ids = [sid for sid, _ in pairs]
    surfaces = {sid: span.surface for sid, span in pairs}
    matrix = np.vstack([span_vectors[sid].vector for sid in span_ids])
    distinct = np.unique(matrix, axis=0).shape[0]

    warnings: list[str] = []
    selection: KSelection | None = None
    if distinct == 1:
        warnings.append(f"all {kind} span vectors identical; produced a single concept")
        assignments = np.zeros(len(span_ids), dtype=int)
        k = 1
    elif config.k is not None:
        if config.k > len(span_ids):
            raise ClusteringError(
                f"k={config.k} exceeds the {len(span_ids)} {kind} spans available"
            )
        k = min(config.k, distinct)
        if k < config.k:
            warnings.append(f"k reduced to {k} distinct {kind} vectors")
        result = kmeans_pp(matrix, k, config.seed, config.max_iters, config.tol)
        assignments = result.assignments
    else:
        selection = select_k(matrix, config)
        if selection.no_knee:
            warnings.append("no pronounced silhouette knee; K choice is weakly supported")
        k = selection.k
        result = kmeans_pp(matrix, k, config.seed, config.max_iters, config.tol)
        assignments = result.assignments

    prefix = kind[:1]
    concepts = []
    for c in range(k):
        member_idx = [i for i in range(len(span_ids)) if assignments[i] == c]
        members = [span_ids[i] for i in member_idx]
        centroid = matrix[member_idx].mean(axis=0)
        titles = _title_spans(members, matrix[member_idx], centroid, surfaces, config.title_count)
        concepts.append(
            Concept(
                id=f"{prefix}{c:03d}",
                kind=kind,
                member_span_ids=tuple(members),
                centroid=centroid,
                title_spans=titles,
            )
        )
    return ConceptBuildResult(concepts=tuple(concepts), selection=selection, warnings=tuple(warnings))


def _title_spans(
    members: list[str],
    vectors: np.ndarray,
    centroid: np.ndarray,
    surfaces: dict[str, str],
    count: int,
) -> tuple[str, ...]:
    c_norm = float(np.linalg.norm(centroid))
    sims = []
    for i, sid in enumerate(members):
        v_norm = float(np.linalg.norm(vectors[i]))
        sim = 0.0
        if c_norm > 0 and v_norm > 0:
            sim = float(np.dot(vectors[i], centroid) / (v_norm * c_norm))
        sims.append((-sim, i, sid))
    titles: list[str] = []
    for _, _, sid in sorted(sims):
        surface = surfaces[sid]
        if surface not in titles:
            titles.append(surface)
        if len(titles) == count:
            break
    return tuple(titles)
