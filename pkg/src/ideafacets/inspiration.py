"""Inspiration retrieval around a seed problem.

A short problem description is embedded and mapped to its nearest
purpose concept; the concept graph's outgoing purpose->purpose edges
supply neighbor concepts, each summarized into a box of K representative
spans either by TextRank (PageRank over the intra-cluster cosine
similarity graph) or by nearness to the seed.  Two baselines round out a
session: corpus-wide nearest purpose spans, and a random concept's
TextRank summary.  Boxes are shuffled with a seeded RNG so raters are
blind to condition.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

import numpy as np

from .clustering import Concept
from .corpus import PURPOSE, Corpus
from .embeddings import SpanEmbedder, SpanVector
from .rules import ConceptGraph, Edge, neighbors

COND_GRAPH_TEXTRANK = "graph_textrank"
COND_GRAPH_NEAREST = "graph_nearest"
COND_BASELINE_SPAN_SIM = "baseline_span_sim"
COND_BASELINE_RANDOM = "baseline_random"
CONDITIONS = (
    COND_GRAPH_TEXTRANK,
    COND_GRAPH_NEAREST,
    COND_BASELINE_SPAN_SIM,
    COND_BASELINE_RANDOM,
)

PAGERANK_DAMPING = 0.85
PAGERANK_TOL = 1e-8
PAGERANK_MAX_ITERS = 100


class InspirationError(ValueError):
    """Seed or session inputs that cannot be served."""


@dataclass(frozen=True)
class SeedProblem:
    text: str
    vector: SpanVector
    mapped_concept: str


@dataclass(frozen=True)
class InspirationBox:
    condition: str
    concept_id: str | None
    spans: tuple[str, ...]
    display_order: int = 0
    shortfall: bool = False
    failed: bool = False

    def as_dict(self) -> dict:
        return {
            "condition": self.condition,
            "concept_id": self.concept_id,
            "spans": list(self.spans),
            "display_order": self.display_order,
            "shortfall": self.shortfall,
            "failed": self.failed,
        }


@dataclass(frozen=True)
class Session:
    session_id: str
    seed_text: str
    mapped_concept: str
    boxes: tuple[InspirationBox, ...]  # sorted by display_order
    flags: tuple[str, ...] = field(default_factory=tuple)

    def as_dict(self) -> dict:
        return {
            "session_id": self.session_id,
            "seed": self.seed_text,
            "mapped_concept": self.mapped_concept,
            "boxes": [b.as_dict() for b in self.boxes],
            "flags": list(self.flags),
        }

    @staticmethod
    def from_dict(record: dict) -> "Session":
        boxes = tuple(
            InspirationBox(
                condition=b["condition"],
                concept_id=b.get("concept_id"),
                spans=tuple(b["spans"]),
                display_order=b["display_order"],
                shortfall=b.get("shortfall", False),
                failed=b.get("failed", False),
            )
            for b in record["boxes"]
        )
        return Session(
            session_id=record["session_id"],
            seed_text=record["seed"],
            mapped_concept=record.get("mapped_concept", ""),
            boxes=boxes,
            flags=tuple(record.get("flags", ())),
        )


@dataclass(frozen=True)
class SessionConfig:
    conditions: tuple[str, ...] = CONDITIONS
    boxes_per_condition: int = 2
    spans_per_box: int = 5
    top_r: int = 3
    rng_seed: int = 0


def map_seed(text: str, concepts: list[Concept], embedder: SpanEmbedder) -> SeedProblem:
    """Map a problem description to the purpose concept whose centroid is
    most cosine-similar to the seed embedding (ties by concept id)."""
    purpose_concepts = [c for c in concepts if c.kind == PURPOSE]
    if not purpose_concepts:
        raise InspirationError("no purpose concepts available")
    sv = embedder.embed_text(text)
    if sv.oov:
        raise InspirationError(f"seed text {text!r} is entirely out of vocabulary")
    best_id, best_sim = None, -np.inf
    for concept in sorted(purpose_concepts, key=lambda c: c.id):
        norm = float(np.linalg.norm(concept.centroid))
        sim = float(np.dot(sv.vector, concept.centroid) / norm) if norm > 0 else 0.0
        if sim > best_sim:
            best_id, best_sim = concept.id, sim
    return SeedProblem(text=text, vector=sv, mapped_concept=best_id)


def graph_inspirations(seed: SeedProblem, graph: ConceptGraph, top_r: int = 3) -> list[Edge]:
    """Top outgoing purpose->purpose edges from the seed's concept by
    confidence; empty when the concept is isolated (caller may fall back
    to the span-similarity baseline)."""
    kind_of = {cid: c.kind for cid, c in graph.concepts.items()}
    out = [
        e
        for e in neighbors(graph, seed.mapped_concept, direction="out", top_r=len(graph.edges) or 1)
        if kind_of[e.target] == PURPOSE and e.target != seed.mapped_concept
    ]
    return out[:top_r]


def pagerank_scores(weights: np.ndarray) -> np.ndarray:
    """Power iteration on a row-normalized non-negative weight matrix
    with uniform teleport; dangling rows redistribute uniformly.
    Scores sum to 1."""
    n = weights.shape[0]
    if n == 1:
        return np.ones(1)
    out_sums = weights.sum(axis=1)
    transition = np.zeros_like(weights)
    nonzero = out_sums > 0
    transition[nonzero] = weights[nonzero] / out_sums[nonzero, None]
    transition[~nonzero] = 1.0 / n
    scores = np.full(n, 1.0 / n)
    for _ in range(PAGERANK_MAX_ITERS):
        updated = (1.0 - PAGERANK_DAMPING) / n + PAGERANK_DAMPING * (transition.T @ scores)
        if float(np.abs(updated - scores).sum()) < PAGERANK_TOL:
            scores = updated
            break
        scores = updated
    return scores


def textrank_weights(vectors: np.ndarray) -> np.ndarray:
    """Complete similarity graph over spans: cosine clipped at zero, no
    self-loops."""
    norms = np.linalg.norm(vectors, axis=1)
    safe = np.where(norms > 0, norms, 1.0)
    unit = vectors / safe[:, None]
    sims = unit @ unit.T
    np.fill_diagonal(sims, 0.0)
    return np.maximum(sims, 0.0)


@dataclass(frozen=True)
class Summary:
    spans: tuple[str, ...]  # surfaces, deduplicated
    span_ids: tuple[str, ...]
    shortfall: bool


def summarize_textrank(
    concept: Concept,
    span_vectors: dict[str, SpanVector],
    corpus: Corpus,
    k: int = 5,
    exclude: frozenset[str] = frozenset(),
) -> Summary:
    """Top-k member spans by PageRank centrality in the intra-concept
    similarity graph, deduplicated by surface."""
    members = list(concept.member_span_ids)
    vectors = np.vstack([span_vectors[sid].vector for sid in members])
    if len(members) == 1:
        scores = np.ones(1)
    else:
        scores = pagerank_scores(textrank_weights(vectors))
    ranked = sorted(range(len(members)), key=lambda i: (-scores[i], members[i]))
    return _pick_spans(ranked, members, corpus, k, exclude)


def summarize_nearest(
    concept: Concept,
    seed: SeedProblem,
    span_vectors: dict[str, SpanVector],
    corpus: Corpus,
    k: int = 5,
    exclude: frozenset[str] = frozenset(),
) -> Summary:
    """Top-k member spans by cosine similarity to the seed vector."""
    members = list(concept.member_span_ids)
    sims = [float(np.dot(span_vectors[sid].vector, seed.vector.vector)) for sid in members]
    ranked = sorted(range(len(members)), key=lambda i: (-sims[i], members[i]))
    return _pick_spans(ranked, members, corpus, k, exclude)


def _pick_spans(
    ranked: list[int],
    members: list[str],
    corpus: Corpus,
    k: int,
    exclude: frozenset[str],
) -> Summary:
    surfaces: list[str] = []
    ids: list[str] = []
    for i in ranked:
        _, span = corpus.resolve_span(members[i])
        if span.surface in exclude or span.surface in surfaces:
            continue
        surfaces.append(span.surface)
        ids.append(members[i])
        if len(surfaces) == k:
            break
    return Summary(spans=tuple(surfaces), span_ids=tuple(ids), shortfall=len(surfaces) < k)


def baseline_span_similarity(
    seed: SeedProblem,
    corpus: Corpus,
    span_vectors: dict[str, SpanVector],
    k: int = 5,
    offset: int = 0,
) -> Summary:
    """Corpus-wide top-k purpose spans nearest the seed, skipping exact
    surface duplicates of the seed text.  ``offset`` skips past the first
    ``offset`` picks so successive boxes don't repeat."""
    pairs = corpus.spans_with_ids(PURPOSE)
    if len(pairs) < k:
        raise InspirationError(f"corpus has only {len(pairs)} purpose spans; need {k}")
    sims = []
    for span_id, span in pairs:
        sims.append((-float(np.dot(span_vectors[span_id].vector, seed.vector.vector)), span_id, span.surface))
    sims.sort()
    surfaces: list[str] = []
    ids: list[str] = []
    for _, span_id, surface in sims:
        if surface == seed.text or surface in surfaces:
            continue
        surfaces.append(surface)
        ids.append(span_id)
        if len(surfaces) == offset + k:
            break
    picked = surfaces[offset : offset + k]
    picked_ids = ids[offset : offset + k]
    return Summary(spans=tuple(picked), span_ids=tuple(picked_ids), shortfall=len(picked) < k)


def baseline_random(
    concepts: list[Concept],
    rng: np.random.Generator,
    span_vectors: dict[str, SpanVector],
    corpus: Corpus,
    k: int = 5,
    exclude: frozenset[str] = frozenset(),
) -> tuple[Concept, Summary]:
    """A uniformly random purpose concept summarized with TextRank."""
    purpose_concepts = sorted((c for c in concepts if c.kind == PURPOSE), key=lambda c: c.id)
    if not purpose_concepts:
        raise InspirationError("no purpose concepts to draw from")
    concept = purpose_concepts[int(rng.integers(len(purpose_concepts)))]
    return concept, summarize_textrank(concept, span_vectors, corpus, k, exclude)


def generate_session(
    seed_text: str,
    concepts: list[Concept],
    graph: ConceptGraph,
    corpus: Corpus,
    span_vectors: dict[str, SpanVector],
    embedder: SpanEmbedder,
    config: SessionConfig = SessionConfig(),
) -> Session:
    """Assemble, shuffle, and number the inspiration boxes for one seed.

    Each configured condition contributes ``boxes_per_condition`` boxes.
    Graph conditions use the top consequent concepts; when the seed's
    concept is isolated they fall back to the span-similarity baseline
    (flagged).  A condition failure yields a flagged empty box rather
    than aborting.  The seed's exact surface never appears in a box.
    """
    rng = np.random.default_rng(config.rng_seed)
    seed = map_seed(seed_text, concepts, embedder)
    exclude = frozenset({seed_text})
    k = config.spans_per_box
    per = config.boxes_per_condition
    flags: list[str] = []

    consequents = graph_inspirations(seed, graph, top_r=max(config.top_r, per))
    if not consequents:
        flags.append("isolated_seed_concept")

    boxes: list[InspirationBox] = []
    for condition in config.conditions:
        for variant in range(per):
            boxes.append(
                _build_box(
                    condition, variant, seed, consequents, concepts, corpus,
                    span_vectors, rng, k, exclude, flags,
                )
            )

    order = rng.permutation(len(boxes))
    shuffled = [None] * len(boxes)
    for position, box_idx in enumerate(order):
        b = boxes[int(box_idx)]
        shuffled[position] = InspirationBox(
            condition=b.condition,
            concept_id=b.concept_id,
            spans=b.spans,
            display_order=position,
            shortfall=b.shortfall,
            failed=b.failed,
        )
    session_id = "session-" + hashlib.sha256(
        f"{seed_text}|{config.rng_seed}".encode("utf-8")
    ).hexdigest()[:12]
    return Session(
        session_id=session_id,
        seed_text=seed_text,
        mapped_concept=seed.mapped_concept,
        boxes=tuple(shuffled),
        flags=tuple(flags),
    )


def _build_box(
    condition: str,
    variant: int,
    seed: SeedProblem,
    consequents: list[Edge],
    concepts: list[Concept],
    corpus: Corpus,
    span_vectors: dict[str, SpanVector],
    rng: np.random.Generator,
    k: int,
    exclude: frozenset[str],
    flags: list[str],
) -> InspirationBox:
    by_id = {c.id: c for c in concepts}
    try:
        if condition in (COND_GRAPH_TEXTRANK, COND_GRAPH_NEAREST):
            if variant >= len(consequents):
                # Isolated or under-connected seed: fall back to the
                # span-similarity baseline so the session stays full.
                flags.append(f"{condition}:{variant}:fallback_span_sim")
                summary = baseline_span_similarity(
                    seed, corpus, span_vectors, k, offset=variant * k
                )
                return InspirationBox(condition, None, summary.spans, shortfall=summary.shortfall)
            concept = by_id[consequents[variant].target]
            if condition == COND_GRAPH_TEXTRANK:
                summary = summarize_textrank(concept, span_vectors, corpus, k, exclude)
            else:
                summary = summarize_nearest(concept, seed, span_vectors, corpus, k, exclude)
            return InspirationBox(condition, concept.id, summary.spans, shortfall=summary.shortfall)
        if condition == COND_BASELINE_SPAN_SIM:
            summary = baseline_span_similarity(seed, corpus, span_vectors, k, offset=variant * k)
            return InspirationBox(condition, None, summary.spans, shortfall=summary.shortfall)
        if condition == COND_BASELINE_RANDOM:
            concept, summary = baseline_random(concepts, rng, span_vectors, corpus, k, exclude)
            return InspirationBox(condition, concept.id, summary.spans, shortfall=summary.shortfall)
        raise InspirationError(f"unknown condition {condition!r}")
    except InspirationError as exc:
        flags.append(f"{condition}:{variant}:failed:{exc}")
        return InspirationBox(condition, None, (), failed=True)


def save_session(session: Session, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(session.as_dict(), fh, ensure_ascii=False, sort_keys=True, indent=2)
        fh.write("\n")


def load_session(path) -> Session:
    with open(path, encoding="utf-8") as fh:
        return Session.from_dict(json.load(fh))
