# Building the functional concept graph: cluster spans into concepts,
# mine co-occurrence rules between them, and read the typed edges.
#
# Concepts are k-means++ clusters of same-kind span vectors.  A document
# then becomes a "transaction" -- the set of concepts it mentions -- and
# confidence rules between concepts become directed edges: one-way high
# confidence reads as a sub-relation, two-way as abstract similarity,
# purpose<->mechanism pairs as functionality.
#
# Run:  python3 demos/02_concept_graph.py

from importlib import resources

from ideafacets import (
    ClusteringConfig,
    SpanEmbedder,
    build_concepts,
    build_graph,
    build_transactions,
    edge_provenance,
    load_corpus,
    load_vectors,
    mine_rules,
)
from ideafacets.rules import graph_to_dot

data = resources.files("ideafacets").joinpath("data")
corpus, _ = load_corpus(data / "fixture_corpus.jsonl")
table = load_vectors(data / "fixture_vectors.txt", 32)
embedder = SpanEmbedder(table)
span_vectors = embedder.embed_corpus(corpus)

# Cluster purposes and mechanisms separately.  The demo corpus has 14
# planted purpose themes and 11 mechanism themes; on real data leave
# k=None and a silhouette-knee search on k_grid picks K for you.
purpose = build_concepts(corpus, span_vectors, "purpose", ClusteringConfig(k=14, seed=7))
mechanism = build_concepts(corpus, span_vectors, "mechanism", ClusteringConfig(k=11, seed=7))
concepts = list(purpose.concepts) + list(mechanism.concepts)
print(f"{len(purpose.concepts)} purpose concepts, {len(mechanism.concepts)} mechanism concepts")
for concept in purpose.concepts:
    print(f"  {concept.id} ({concept.size:2d} spans): {'; '.join(concept.title_spans)}")

# Transactions pool both kinds so cross-kind functionality rules can
# emerge from a single mining pass.
assignments = {**purpose.assignments, **mechanism.assignments}
transactions = build_transactions(corpus, assignments)
rules = mine_rules(transactions, min_support_count=3, min_confidence=0.5)
print(f"\n{len(rules)} rules at support>=3, confidence>=0.5")

graph = build_graph(rules, concepts, transactions, type_threshold=0.6)
print(f"graph: {len(graph.concepts)} nodes, {len(graph.edges)} edges\n")
for edge in sorted(graph.edges, key=lambda e: (-e.confidence, e.source)):
    src = graph.concepts[edge.source].title_spans[0]
    dst = graph.concepts[edge.target].title_spans[0]
    print(f"  [{edge.relation:^13}] {src!r} -> {dst!r}  "
          f"conf={edge.confidence:.2f} support={edge.support_count}")

# Every edge is interpretable: it names the products it came from.
edge = max(graph.edges, key=lambda e: e.support_count)
print(f"\nwhy {edge.source} -> {edge.target}?")
for pair in edge_provenance(graph, edge.source, edge.target, corpus):
    doc = corpus.get(pair["doc_id"])
    _, src_span = corpus.resolve_span(pair["source_span"])
    _, dst_span = corpus.resolve_span(pair["target_span"])
    print(f"  {doc.title}: {src_span.surface!r} + {dst_span.surface!r}")

# A DOT export is one call away for external graph tooling.
print(f"\nDOT export: {len(graph_to_dot(graph).splitlines())} lines "
      "(pipe to `dot -Tsvg` to draw)")
