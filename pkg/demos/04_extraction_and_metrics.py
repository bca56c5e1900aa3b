# The evaluation side: scoring span extractors and judged rankings.
#
# The engine consumes spans from any extractor.  This demo runs the
# bundled cue-word heuristic over the demo corpus, scores it against the
# gold spans token-by-token (IOB encoding, B+I pooled per class), and
# then computes ranking metrics (AP/NDCG) the way a search study would.
#
# Run:  python3 demos/04_extraction_and_metrics.py

from importlib import resources

from ideafacets import (
    JudgedRanking,
    average_precision,
    load_corpus,
    ndcg,
    precision_at_k,
    score_extraction,
    spans_to_iob,
)
from ideafacets.extraction import ScoredPrediction, extract_corpus

data = resources.files("ideafacets").joinpath("data")
gold, _ = load_corpus(data / "fixture_corpus.jsonl")

# IOB view of one document: how spans become token labels.
doc = gold.get("uv-sanitizer")
seq = spans_to_iob(doc)
pairs = [f"{t}/{l}" for t, l in zip(seq.tokens, seq.labels) if l != "O"]
print("labeled tokens of 'uv-sanitizer':", " ".join(pairs))

# Run the lexical heuristic extractor and score it.  Cue words are a
# weak signal, so expect modest numbers -- the point is the harness.
predicted = extract_corpus(gold)
report = score_extraction(predicted, gold)
print("\ntoken-level scores of the cue-word heuristic:")
for label, prf in report.per_label.items():
    print(f"  {label:<10} P={prf.precision:.3f} R={prf.recall:.3f} F1={prf.f1:.3f}")
print(f"  micro      F1={report.micro.f1:.3f}   (span-exact F1={report.span_exact.f1:.3f})")

# Precision@K over confidence-ranked predictions (>=50% token Jaccard
# against a same-label gold span counts as correct).
predictions = [
    ScoredPrediction(span=span, confidence=span.confidence or 0.5, doc_id=doc.id)
    for doc in predicted for span in doc.spans
]
for k in (1, 5, 10, 20):
    result = precision_at_k(predictions, gold, k)
    print(f"  P@{result.k_effective:<3} = {result.value:.3f}")

# Ranking metrics for judged search results: binary relevance, top-20
# pooled judgments.  AP divides by the judged-pool relevant count; NDCG
# uses the log2(i+1) discount.
judged = JudgedRanking(
    query_id="light-not-light",
    ranked=("uv-sanitizer", "billiard-laser", "toe-guard", "allergy-sticker"),
    relevance={"uv-sanitizer": 1, "billiard-laser": 1, "toe-guard": 0, "allergy-sticker": 1},
)
print(f"\nexample judged ranking: AP={average_precision(judged):.4f} NDCG={ndcg(judged):.4f}")
