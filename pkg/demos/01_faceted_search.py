# Faceted functional search over the bundled 30-product demo corpus.
#
# Each product is represented as two sets of unit span vectors: what it
# is FOR (purposes) and HOW it works (mechanisms).  A query can pin one
# side and negate the other, e.g. "uses light, but NOT for lighting" --
# the classic alternative-uses setup.
#
# Run:  python3 demos/01_faceted_search.py

from importlib import resources

from ideafacets import (
    FacetQuery,
    SpanEmbedder,
    build_search_index,
    load_corpus,
    load_vectors,
    search,
)

data = resources.files("ideafacets").joinpath("data")
corpus, stats = load_corpus(data / "fixture_corpus.jsonl")
print(f"corpus: {stats.documents} products, "
      f"{stats.purpose_spans} purpose spans, {stats.mechanism_spans} mechanism spans")

table = load_vectors(data / "fixture_vectors.txt", 32)
embedder = SpanEmbedder(table)
index = build_search_index(corpus, embedder)


def show(title, query):
    response = search(query, index)
    print(f"\n=== {title} ===")
    if query.purpose_neg or query.mech_neg:
        print(f"excluded by negation: {', '.join(response.excluded_doc_ids)}")
    for rank, result in enumerate(response.results, start=1):
        doc = corpus.get(result.doc_id)
        best = max(result.matched_spans, key=lambda m: m.similarity)
        _, span = corpus.resolve_span(best.span_id)
        print(f"  {rank}. {doc.title:<28} score={result.score:.4f}  "
              f"best match: {span.label} span {span.surface!r}")


# Scenario 1: a light-bulb company wants NEW uses of light -- anything
# whose purpose is not itself about lighting.  The desk lamp disappears;
# the UV sanitizer and the laser billiard instructor surface.
show("mechanism: light, purpose: NOT light",
     FacetQuery(mech_pos=("light",), purpose_neg=("light",), limit=5))

# Scenario 2: positive facets on both sides. "Use light FOR cleaning"
# pins the purpose too, so only the UV box scores well on both.
show("mechanism: light, purpose: cleaning",
     FacetQuery(mech_pos=("light",), purpose_pos=("cleaning",), limit=5))

# Scenario 3: multiple negations intersect.  Products drinking or
# cleaning with water are filtered; the hydrogen camp lighter remains.
show("mechanism: water, purpose: NOT cleaning, NOT drinking",
     FacetQuery(mech_pos=("water",), purpose_neg=("cleaning", "drinking"), limit=5))

# The two set distances differ on multi-span products: AVG blends all of
# a product's purpose spans, MAXMIN requires every query chunk to find
# one good span.  Compare them on the same query:
for method in ("avg", "maxmin"):
    response = search(FacetQuery(mech_pos=("RFID",),
                                 purpose_neg=("locating", "tracking"),
                                 method=method, limit=3), index)
    ranked = ", ".join(r.doc_id for r in response.results)
    print(f"\n[{method}] RFID but not for locating/tracking -> {ranked}")
