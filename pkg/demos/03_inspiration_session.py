# Inspiration sessions: from a seed problem to rater-ready boxes.
#
# A short problem description is mapped onto its nearest purpose concept;
# the concept graph's consequents supply neighbor problems, summarized
# into boxes of 5 spans by TextRank (cluster-representative) or by
# nearness to the seed.  Two baselines fill out the 8-box session, which
# is shuffled so raters are blind to condition.  Collected marks feed the
# agreement statistics.
#
# Run:  python3 demos/03_inspiration_session.py

from importlib import resources

from ideafacets import SessionConfig, generate_session, load_corpus, load_vectors
from ideafacets.clustering import ClusteringConfig, build_concepts
from ideafacets.embeddings import SpanEmbedder
from ideafacets.metrics import MarkRecord, box_agreement, span_agreement
from ideafacets.rules import build_graph, build_transactions, mine_rules

data = resources.files("ideafacets").joinpath("data")
corpus, _ = load_corpus(data / "fixture_corpus.jsonl")
table = load_vectors(data / "fixture_vectors.txt", 32)
embedder = SpanEmbedder(table)
span_vectors = embedder.embed_corpus(corpus)

purpose = build_concepts(corpus, span_vectors, "purpose", ClusteringConfig(k=14, seed=7))
mechanism = build_concepts(corpus, span_vectors, "mechanism", ClusteringConfig(k=11, seed=7))
concepts = list(purpose.concepts) + list(mechanism.concepts)
transactions = build_transactions(corpus, {**purpose.assignments, **mechanism.assignments})
graph = build_graph(mine_rules(transactions, 3, 0.5), concepts, transactions, 0.6)

seed = "morning medicine reminder"
session = generate_session(
    seed, concepts, graph, corpus, span_vectors, embedder,
    SessionConfig(rng_seed=11),
)
print(f"seed {seed!r} mapped to concept {session.mapped_concept}")
print(f"session {session.session_id}: {len(session.boxes)} boxes in randomized order\n")
for box in session.boxes:
    label = box.concept_id or "corpus-wide"
    print(f"  box {box.display_order} [{box.condition:<18}] ({label})")
    for i, span in enumerate(box.spans):
        print(f"      {i}. {span}")

# Simulate two raters marking whatever mentions coffee or health --
# in a study these marks come from the explorer UI's marking view.
marks = []
for rater in ("rater-1", "rater-2"):
    marked = []
    for b, box in enumerate(session.boxes):
        for s, span in enumerate(box.spans):
            if "coffee" in span or "health" in span:
                marked.append((b, s))
    marks.append(MarkRecord(session_id=session.session_id, rater_id=rater,
                            marked=tuple(marked)))

sessions = {session.session_id: session}
print("\nspan agreement (>=2 raters), by condition:")
for condition, value in sorted(span_agreement(sessions, marks).items()):
    print(f"  {condition:<20} {value:.2f}")
print("box agreement (>=2 spans by >=2 raters), by condition:")
for condition, value in sorted(box_agreement(sessions, marks).items()):
    print(f"  {condition:<20} {value:.2f}")
