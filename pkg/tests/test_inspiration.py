import numpy as np
import pytest

from ideafacets.clustering import Concept
from ideafacets.corpus import PURPOSE, Corpus, parse_document
from ideafacets.embeddings import SpanEmbedder, SpanVector, WordVectorTable
from ideafacets.inspiration import (
    CONDITIONS,
    InspirationError,
    Session,
    SessionConfig,
    baseline_random,
    baseline_span_similarity,
    generate_session,
    graph_inspirations,
    map_seed,
    pagerank_scores,
    summarize_nearest,
    summarize_textrank,
    textrank_weights,
)
from oracles import pagerank_reference


def unit(*values):
    v = np.array(values, dtype=float)
    return v / np.linalg.norm(v)


def make_concept(cid, members, kind=PURPOSE):
    return Concept(id=cid, kind=kind, member_span_ids=tuple(members),
                   centroid=np.zeros(2), title_spans=())


class TestPageRank:
    def test_uniform_on_identical_vectors(self):
        n = 6
        weights = textrank_weights(np.vstack([unit(1.0, 0.5)] * n))
        scores = pagerank_scores(weights)
        np.testing.assert_allclose(scores, np.full(n, 1.0 / n), atol=1e-8)

    def test_scores_sum_to_one(self):
        rng = np.random.default_rng(3)
        weights = np.abs(rng.standard_normal((12, 12)))
        np.fill_diagonal(weights, 0.0)
        assert pagerank_scores(weights).sum() == pytest.approx(1.0, abs=1e-8)

    def test_matches_dense_oracle_on_random_graphs(self):
        rng = np.random.default_rng(19)
        for _ in range(20):
            n = 10
            weights = np.abs(rng.standard_normal((n, n)))
            weights[rng.uniform(size=(n, n)) < 0.3] = 0.0
            np.fill_diagonal(weights, 0.0)
            mine = pagerank_scores(weights)
            ref = pagerank_reference([list(map(float, row)) for row in weights])
            np.testing.assert_allclose(mine, ref, atol=1e-6)

    def test_four_node_hand_graph(self):
        weights = np.array([
            [0.0, 1.0, 0.5, 0.0],
            [1.0, 0.0, 0.25, 0.0],
            [0.5, 0.25, 0.0, 0.1],
            [0.0, 0.0, 0.1, 0.0],
        ])
        mine = pagerank_scores(weights)
        ref = pagerank_reference([list(map(float, row)) for row in weights])
        np.testing.assert_allclose(mine, ref, atol=1e-6)
        assert mine[0] > mine[3]  # well-connected node outranks the leaf


def span_corpus(surfaces):
    spans = []
    offset = 0
    for surface in surfaces:
        spans.append({"start": offset, "end": offset + len(surface), "label": "purpose"})
        offset += len(surface) + 1
    record = {"id": "doc", "text": " ".join(surfaces), "spans": spans}
    return Corpus([parse_document(record)])


class TestSummarizers:
    def build(self, vectors_by_surface):
        surfaces = list(vectors_by_surface)
        corpus = span_corpus(surfaces)
        span_vectors = {
            f"doc:{i}": SpanVector(vectors_by_surface[s]) for i, s in enumerate(surfaces)
        }
        concept = make_concept("p0", [f"doc:{i}" for i in range(len(surfaces))])
        return corpus, span_vectors, concept

    def test_textrank_identical_vectors_any_k(self):
        corpus, vectors, concept = self.build({
            "aa": unit(1, 0), "bb": unit(1, 0), "cc": unit(1, 0)})
        summary = summarize_textrank(concept, vectors, corpus, k=2)
        assert len(summary.spans) == 2
        assert not summary.shortfall

    def test_textrank_shortfall_flag(self):
        corpus, vectors, concept = self.build({"aa": unit(1, 0), "bb": unit(0, 1)})
        summary = summarize_textrank(concept, vectors, corpus, k=5)
        assert summary.shortfall
        assert set(summary.spans) == {"aa", "bb"}

    def test_textrank_dedups_surfaces(self):
        surfaces = ["same", "same", "other"]
        corpus = span_corpus(surfaces)
        vectors = {f"doc:{i}": SpanVector(unit(1, 0.1 * i + 0.01)) for i in range(3)}
        concept = make_concept("p0", [f"doc:{i}" for i in range(3)])
        summary = summarize_textrank(concept, vectors, corpus, k=3)
        assert sorted(summary.spans) == ["other", "same"]

    def test_nearest_orders_by_seed_similarity(self):
        corpus, vectors, concept = self.build({
            "close": unit(1, 0.05), "far": unit(0, 1), "mid": unit(1, 1)})
        seed_vec = SpanVector(unit(1, 0))
        seed = map_seed_stub(seed_vec)
        summary = summarize_nearest(concept, seed, vectors, corpus, k=2)
        assert list(summary.spans) == ["close", "mid"]

    def test_nearest_matches_exhaustive_sort(self):
        rng = np.random.default_rng(23)
        surfaces = [f"s{i}" for i in range(12)]
        corpus = span_corpus(surfaces)
        vectors = {
            f"doc:{i}": SpanVector(v / np.linalg.norm(v))
            for i, v in enumerate(rng.standard_normal((12, 4)))
        }
        concept = make_concept("p0", [f"doc:{i}" for i in range(12)])
        seed_vec = rng.standard_normal(4)
        seed = map_seed_stub(SpanVector(seed_vec / np.linalg.norm(seed_vec)))
        summary = summarize_nearest(concept, seed, vectors, corpus, k=5)
        sims = sorted(
            ((float(np.dot(vectors[f"doc:{i}"].vector, seed.vector.vector)), f"s{i}")
             for i in range(12)),
            key=lambda t: (-t[0], t[1]),
        )
        assert list(summary.spans) == [s for _, s in sims[:5]]


def map_seed_stub(vector):
    from ideafacets.inspiration import SeedProblem
    return SeedProblem(text="[stub]", vector=vector, mapped_concept="p0")


class TestMapSeed:
    def embedder(self):
        table = WordVectorTable(2, {
            "charge": np.array([1.0, 0.0]), "clean": np.array([0.0, 1.0])})
        return SpanEmbedder(table, stopwords=frozenset())

    def concepts(self):
        return [
            Concept(id="p-charge", kind=PURPOSE, member_span_ids=("d:0",),
                    centroid=np.array([1.0, 0.0]), title_spans=("charge",)),
            Concept(id="p-clean", kind=PURPOSE, member_span_ids=("d:1",),
                    centroid=np.array([0.0, 1.0]), title_spans=("clean",)),
            Concept(id="m-x", kind="mechanism", member_span_ids=("d:2",),
                    centroid=np.array([1.0, 0.0]), title_spans=("x",)),
        ]

    def test_verbatim_title_maps_to_its_concept(self):
        seed = map_seed("charge", self.concepts(), self.embedder())
        assert seed.mapped_concept == "p-charge"

    def test_mechanism_concepts_ignored(self):
        seed = map_seed("charge", self.concepts(), self.embedder())
        assert seed.mapped_concept != "m-x"

    def test_oov_seed_rejected(self):
        with pytest.raises(InspirationError, match="vocabulary"):
            map_seed("zzz", self.concepts(), self.embedder())

    def test_deterministic(self, fixture_bundle, fixture_payload):
        seed_text = fixture_payload["planted"]["seed"]
        a = map_seed(seed_text, fixture_bundle.concepts, fixture_bundle.embedder)
        b = map_seed(seed_text, fixture_bundle.concepts, fixture_bundle.embedder)
        assert a.mapped_concept == b.mapped_concept

    def test_fixture_seed_maps_to_alert_concept(self, fixture_bundle, fixture_payload):
        seed = map_seed(fixture_payload["planted"]["seed"],
                        fixture_bundle.concepts, fixture_bundle.embedder)
        member_surfaces = {
            fixture_bundle.corpus.resolve_span(sid)[1].surface
            for sid in fixture_bundle.concept(seed.mapped_concept).member_span_ids
        }
        assert member_surfaces == set(fixture_payload["planted"]["seed_concept_spans"])


class TestGraphInspirations:
    def test_fixture_consequents(self, fixture_bundle, fixture_payload):
        seed = map_seed(fixture_payload["planted"]["seed"],
                        fixture_bundle.concepts, fixture_bundle.embedder)
        edges = graph_inspirations(seed, fixture_bundle.graph, top_r=3)
        target_surfaces = set()
        for edge in edges:
            for sid in fixture_bundle.concept(edge.target).member_span_ids:
                target_surfaces.add(fixture_bundle.corpus.resolve_span(sid)[1].surface)
        assert "coffee alarm" in target_surfaces
        assert "real time health checker" in target_surfaces

    def test_top_r_larger_than_out_degree(self, fixture_bundle, fixture_payload):
        seed = map_seed(fixture_payload["planted"]["seed"],
                        fixture_bundle.concepts, fixture_bundle.embedder)
        assert len(graph_inspirations(seed, fixture_bundle.graph, top_r=50)) == 2

    def test_confidence_order(self, fixture_bundle, fixture_payload):
        seed = map_seed(fixture_payload["planted"]["seed"],
                        fixture_bundle.concepts, fixture_bundle.embedder)
        edges = graph_inspirations(seed, fixture_bundle.graph, top_r=5)
        confidences = [e.confidence for e in edges]
        assert confidences == sorted(confidences, reverse=True)


class TestBaselines:
    def test_span_similarity_excludes_seed_surface(self, fixture_bundle):
        seed = map_seed("coffee alarm", fixture_bundle.concepts, fixture_bundle.embedder)
        summary = baseline_span_similarity(
            seed, fixture_bundle.corpus, fixture_bundle.span_vectors, k=5)
        assert "coffee alarm" not in summary.spans
        assert len(summary.spans) == 5

    def test_span_similarity_needs_enough_spans(self):
        corpus = span_corpus(["only", "two"])
        vectors = {"doc:0": SpanVector(unit(1, 0)), "doc:1": SpanVector(unit(0, 1))}
        seed = map_seed_stub(SpanVector(unit(1, 0)))
        with pytest.raises(InspirationError):
            baseline_span_similarity(seed, corpus, vectors, k=5)

    def test_random_concept_deterministic(self, fixture_bundle):
        rng_a = np.random.default_rng(5)
        rng_b = np.random.default_rng(5)
        concept_a, _ = baseline_random(
            fixture_bundle.concepts, rng_a, fixture_bundle.span_vectors, fixture_bundle.corpus)
        concept_b, _ = baseline_random(
            fixture_bundle.concepts, rng_b, fixture_bundle.span_vectors, fixture_bundle.corpus)
        assert concept_a.id == concept_b.id

    def test_random_concept_distribution(self, fixture_bundle):
        purpose_ids = sorted(c.id for c in fixture_bundle.concepts if c.kind == PURPOSE)
        rng = np.random.default_rng(0)
        draws = 10_000
        counts = {cid: 0 for cid in purpose_ids}
        for _ in range(draws):
            concept, _ = baseline_random(
                fixture_bundle.concepts, rng, fixture_bundle.span_vectors,
                fixture_bundle.corpus, k=1)
            counts[concept.id] += 1
        expected = draws / len(purpose_ids)
        sigma = (draws * (1 / len(purpose_ids)) * (1 - 1 / len(purpose_ids))) ** 0.5
        for cid, count in counts.items():
            assert abs(count - expected) <= 3 * sigma, (cid, count)


class TestSession:
    def test_eight_boxes_and_permutation(self, fixture_bundle, fixture_payload):
        session = fixture_bundle.inspire(fixture_payload["planted"]["seed"], boxes=8)
        assert len(session.boxes) == 8
        assert sorted(b.display_order for b in session.boxes) == list(range(8))
        by_condition = {}
        for box in session.boxes:
            by_condition.setdefault(box.condition, 0)
            by_condition[box.condition] += 1
        assert by_condition == {c: 2 for c in CONDITIONS}

    def test_same_seed_same_order(self, fixture_bundle, fixture_payload):
        a = fixture_bundle.inspire(fixture_payload["planted"]["seed"], boxes=8, rng_seed=3)
        b = fixture_bundle.inspire(fixture_payload["planted"]["seed"], boxes=8, rng_seed=3)
        assert [x.condition for x in a.boxes] == [x.condition for x in b.boxes]
        assert [x.spans for x in a.boxes] == [x.spans for x in b.boxes]

    def test_round_trip_serialization(self, fixture_bundle, fixture_payload, tmp_path):
        from ideafacets.inspiration import load_session, save_session
        session = fixture_bundle.inspire(fixture_payload["planted"]["seed"], boxes=8)
        path = tmp_path / "session.json"
        save_session(session, path)
        assert load_session(path) == session

    def test_no_box_contains_seed_surface(self, fixture_bundle, fixture_corpus):
        # use a seed that verbatim-matches a stored span surface
        session = fixture_bundle.inspire("coffee alarm", boxes=8)
        for box in session.boxes:
            assert "coffee alarm" not in box.spans

    def test_graph_boxes_single_concept_membership(self, fixture_bundle, fixture_payload):
        session = fixture_bundle.inspire(fixture_payload["planted"]["seed"], boxes=8)
        for box in session.boxes:
            if box.condition.startswith("graph_") and box.concept_id:
                members = {
                    fixture_bundle.corpus.resolve_span(sid)[1].surface
                    for sid in fixture_bundle.concept(box.concept_id).member_span_ids
                }
                assert set(box.spans) <= members

    def test_isolated_seed_falls_back_with_flag(self, fixture_bundle):
        # 'store your shoes neatly' maps to the storage concept, which has
        # no outgoing purpose->purpose edges on the fixture graph
        session = fixture_bundle.inspire("organize and store things", boxes=8)
        graph_boxes = [b for b in session.boxes if b.condition.startswith("graph_")]
        assert all(b.concept_id is None for b in graph_boxes)
        assert "isolated_seed_concept" in session.flags
        assert any("fallback_span_sim" in f for f in session.flags)
        assert all(len(b.spans) > 0 for b in graph_boxes)

    def test_planted_strings_present(self, fixture_bundle, fixture_payload):
        session = fixture_bundle.inspire(fixture_payload["planted"]["seed"], boxes=8)
        spans = {s for box in session.boxes for s in box.spans}
        for needle in fixture_payload["planted"]["box_strings"]:
            assert needle in spans
