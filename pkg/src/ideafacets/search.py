"""Faceted functional search over purpose/mechanism span-vector sets.

Each product is indexed as two sets of unit span vectors (purposes and
mechanisms).  Queries carry positive and negated chunks per side.  Two
set distances are supported:

* ``avg``     -- 1 minus the dot product of the normalized mean query
                 vector and normalized mean span vector.
* ``maxmin``  -- match each query chunk to its best span by dot product,
                 then take 1 minus the worst of those best matches, so a
                 product must cover every chunk to score well.

Negated chunks act as constraints, not score terms: for each negated
chunk the corpus is ranked by distance on that side and only the most
distant ``neg_percentile`` percent of products survive.  Products whose
queried side is empty or entirely out-of-vocabulary are treated as
maximally distant (distance 2), which also means negations never
exclude them.

The scan is exhaustive and deterministic (ties break by doc id); no
approximate index is used, keeping rankings exactly reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .corpus import MECHANISM, PURPOSE, Corpus
from .embeddings import SpanEmbedder, SpanVector

WORST_DISTANCE = 2.0

METHOD_AVG = "avg"
METHOD_MAXMIN = "maxmin"
COMBINE_MODES = ("mean", "sum", "purpose-only")


class QueryError(ValueError):
    """Invalid or unanswerable facet query."""


@dataclass(frozen=True)
class ProductIndexEntry:
    """One product's span-vector sets plus span ids for reporting."""

    doc_id: str
    purpose_ids: tuple[str, ...]
    purpose_matrix: np.ndarray  # (n_p, dim); zero rows for OOV spans
    purpose_oov: np.ndarray  # (n_p,) bool
    mechanism_ids: tuple[str, ...]
    mechanism_matrix: np.ndarray
    mechanism_oov: np.ndarray

    def side(self, label: str) -> tuple[tuple[str, ...], np.ndarray, np.ndarray]:
        if label == PURPOSE:
            return self.purpose_ids, self.purpose_matrix, self.purpose_oov
        return self.mechanism_ids, self.mechanism_matrix, self.mechanism_oov


@dataclass(frozen=True)
class FacetQuery:
    purpose_pos: tuple[str, ...] = ()
    purpose_neg: tuple[str, ...] = ()
    mech_pos: tuple[str, ...] = ()
    mech_neg: tuple[str, ...] = ()
    method: str = METHOD_AVG
    neg_percentile: float = 90.0
    limit: int = 20
    combine: str = "mean"

    def __post_init__(self):
        if not self.purpose_pos and not self.mech_pos:
            raise QueryError("query needs at least one positive purpose or mechanism chunk")
        if self.method not in (METHOD_AVG, METHOD_MAXMIN):
            raise QueryError(f"unknown method {self.method!r}")
        if not 0.0 < self.neg_percentile <= 100.0:
            raise QueryError("neg_percentile must be in (0, 100]")
        if self.limit < 1:
            raise QueryError("limit must be >= 1")
        if self.combine not in COMBINE_MODES:
            raise QueryError(f"unknown combine mode {self.combine!r}")
        if self.combine == "purpose-only" and not self.purpose_pos:
            raise QueryError("combine mode 'purpose-only' requires a positive purpose chunk")


@dataclass(frozen=True)
class MatchedSpan:
    chunk: str
    side: str
    span_id: str
    similarity: float


@dataclass(frozen=True)
class SearchResult:
    doc_id: str
    score: float
    purpose_distance: float | None
    mechanism_distance: float | None
    matched_spans: tuple[MatchedSpan, ...] = ()


@dataclass(frozen=True)
class SearchResponse:
    results: tuple[SearchResult, ...]
    over_constrained: bool = False
    excluded_doc_ids: tuple[str, ...] = ()


class SearchIndex:
    """Immutable exhaustive-scan index over product span-vector sets."""

    def __init__(self, entries: list[ProductIndexEntry], embedder: SpanEmbedder):
        self.entries = list(entries)
        self.embedder = embedder
        self._by_id = {e.doc_id: e for e in self.entries}

    def __len__(self) -> int:
        return len(self.entries)

    def entry(self, doc_id: str) -> ProductIndexEntry:
        return self._by_id[doc_id]


def build_search_index(
    corpus: Corpus,
    embedder: SpanEmbedder,
    span_vectors: dict[str, SpanVector] | None = None,
) -> SearchIndex:
    """Embed every span (or reuse a precomputed span-vector map) and
    assemble per-product index entries."""
    if span_vectors is None:
        span_vectors = embedder.embed_corpus(corpus)
    dim = embedder.dim
    entries = []
    for doc in corpus:
        sides: dict[str, tuple[list[str], list[np.ndarray], list[bool]]] = {
            PURPOSE: ([], [], []),
            MECHANISM: ([], [], []),
        }
        for i, span in enumerate(doc.spans):
            span_id = f"{doc.id}:{i}"
            sv = span_vectors[span_id]
            ids, rows, oov = sides[span.label]
            ids.append(span_id)
            rows.append(sv.vector)
            oov.append(sv.oov)
        entries.append(
            ProductIndexEntry(
                doc_id=doc.id,
                purpose_ids=tuple(sides[PURPOSE][0]),
                purpose_matrix=_stack(sides[PURPOSE][1], dim),
                purpose_oov=np.array(sides[PURPOSE][2], dtype=bool),
                mechanism_ids=tuple(sides[MECHANISM][0]),
                mechanism_matrix=_stack(sides[MECHANISM][1], dim),
                mechanism_oov=np.array(sides[MECHANISM][2], dtype=bool),
            )
        )
    return SearchIndex(entries, embedder)


def _stack(rows: list[np.ndarray], dim: int) -> np.ndarray:
    if not rows:
        return np.zeros((0, dim))
    return np.vstack(rows)


def distance_avg(query_vecs: list[SpanVector], span_matrix: np.ndarray, span_oov: np.ndarray) -> float | None:
    """1 - cos between normalized means; None when the span side has no
    usable (non-OOV) vector."""
    usable = span_matrix[~span_oov] if span_matrix.shape[0] else span_matrix
    if usable.shape[0] == 0:
        return None
    q = _normalized_mean([sv.vector for sv in query_vecs if not sv.oov])
    s = _normalized_mean(list(usable))
    if q is None or s is None:
        return None
    return float(1.0 - np.dot(q, s))


def distance_maxmin(query_vecs: list[SpanVector], span_matrix: np.ndarray, span_oov: np.ndarray) -> float | None:
    """1 - (worst over query chunks of the best span dot product); None
    when the span side has no usable vector."""
    if span_matrix.shape[0] == 0 or bool(np.all(span_oov)):
        return None
    best_per_chunk = []
    for sv in query_vecs:
        if sv.oov:
            continue
        best_per_chunk.append(float(np.max(span_matrix @ sv.vector)))
    if not best_per_chunk:
        return None
    return float(1.0 - min(best_per_chunk))


def _normalized_mean(vectors: list[np.ndarray]) -> np.ndarray | None:
    if not vectors:
        return None
    mean = np.mean(vectors, axis=0)
    norm = float(np.linalg.norm(mean))
    if norm == 0.0:
        return None
    return mean / norm


def _side_distance(
    method: str, query_vecs: list[SpanVector], entry: ProductIndexEntry, side: str
) -> float:
    _, matrix, oov = entry.side(side)
    if method == METHOD_AVG:
        d = distance_avg(query_vecs, matrix, oov)
    else:
        d = distance_maxmin(query_vecs, matrix, oov)
    return WORST_DISTANCE if d is None else d


def embed_chunks(embedder: SpanEmbedder, chunks: tuple[str, ...]) -> list[SpanVector]:
    vecs = []
    for chunk in chunks:
        sv = embedder.embed_text(chunk)
        if sv.oov:
            raise QueryError(
                f"query chunk {chunk!r} is entirely out of vocabulary; "
                "it would match nothing"
            )
        vecs.append(sv)
    return vecs


def negative_filter(
    index: SearchIndex,
    neg_chunks: tuple[str, ...],
    side: str,
    method: str,
    neg_percentile: float,
) -> set[str]:
    """Doc ids allowed by every negated chunk on one side.

    For each chunk, products are ranked by distance to the chunk; the
    floor(N * (100 - p) / 100) closest products are excluded, so the top
    p percent most-distant survive.  Boundary ties survive.
    """
    if not neg_chunks:
        return set(e.doc_id for e in index.entries)
    allowed = set(e.doc_id for e in index.entries)
    n = len(index.entries)
    exclude_count = math.floor(n * (100.0 - neg_percentile) / 100.0)
    for chunk in neg_chunks:
        chunk_vec = embed_chunks(index.embedder, (chunk,))
        distances = [
            (_side_distance(method, chunk_vec, entry, side), entry.doc_id)
            for entry in index.entries
        ]
        if exclude_count <= 0:
            continue
        cutoff = sorted(d for d, _ in distances)[exclude_count]
        allowed &= {doc_id for d, doc_id in distances if d >= cutoff}
    return allowed


def search(query: FacetQuery, index: SearchIndex) -> SearchResponse:
    """Rank products by the positive facets subject to negation filters.

    Score is the combination (mean by default) of the defined positive
    side distances; ascending, ties by doc id, truncated to the query
    limit.  An over-constrained query (negations empty the candidate
    set) returns no results with the flag set.
    """
    if not index.entries:
        raise QueryError("search index is empty")
    purpose_vecs = embed_chunks(index.embedder, query.purpose_pos)
    mech_vecs = embed_chunks(index.embedder, query.mech_pos)

    allowed = negative_filter(index, query.purpose_neg, PURPOSE, query.method, query.neg_percentile)
    allowed &= negative_filter(index, query.mech_neg, MECHANISM, query.method, query.neg_percentile)
    excluded = tuple(sorted(e.doc_id for e in index.entries if e.doc_id not in allowed))
    if not allowed:
        return SearchResponse(results=(), over_constrained=True, excluded_doc_ids=excluded)

    scored = []
    for entry in index.entries:
        if entry.doc_id not in allowed:
            continue
        d_p = _side_distance(query.method, purpose_vecs, entry, PURPOSE) if purpose_vecs else None
        d_m = _side_distance(query.method, mech_vecs, entry, MECHANISM) if mech_vecs else None
        score = _combine(query.combine, d_p, d_m)
        matched = _matched_spans(entry, query, purpose_vecs, mech_vecs)
        scored.append(
            SearchResult(
                doc_id=entry.doc_id,
                score=score,
                purpose_distance=d_p,
                mechanism_distance=d_m,
                matched_spans=matched,
            )
        )
    scored.sort(key=lambda r: (r.score, r.doc_id))
    return SearchResponse(results=tuple(scored[: query.limit]), excluded_doc_ids=excluded)


def _combine(mode: str, d_p: float | None, d_m: float | None) -> float:
    defined = [d for d in (d_p, d_m) if d is not None]
    if mode == "purpose-only":
        return d_p if d_p is not None else WORST_DISTANCE
    if mode == "sum":
        return float(sum(defined))
    return float(sum(defined) / len(defined))


def _matched_spans(
    entry: ProductIndexEntry,
    query: FacetQuery,
    purpose_vecs: list[SpanVector],
    mech_vecs: list[SpanVector],
) -> tuple[MatchedSpan, ...]:
    matches = []
    for side, chunks, vecs in (
        (PURPOSE, query.purpose_pos, purpose_vecs),
        (MECHANISM, query.mech_pos, mech_vecs),
    ):
        ids, matrix, _ = entry.side(side)
        if not ids:
            continue
        for chunk, sv in zip(chunks, vecs):
            sims = matrix @ sv.vector
            best = int(np.argmax(sims))
            matches.append(
                MatchedSpan(chunk=chunk, side=side, span_id=ids[best], similarity=float(sims[best]))
            )
    return tuple(matches)
