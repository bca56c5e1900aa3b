"""ideafacets: faceted functional search and concept-graph mining over
purpose/mechanism span representations of idea corpora."""

from .clustering import (
    Concept,
    ClusteringConfig,
    build_concepts,
    kmeans_pp,
    select_k,
    silhouette,
)
from .corpus import (
    Corpus,
    CorpusError,
    Document,
    Span,
    load_corpus,
    save_corpus,
    tokenize,
)
from .embeddings import (
    SpanEmbedder,
    SpanVector,
    WordVectorTable,
    load_precomputed_span_vectors,
    load_stopwords,
    load_vectors,
)
from .extraction import (
    heuristic_extract,
    iob_to_spans,
    precision_at_k,
    score_extraction,
    spans_to_iob,
)
from .inspiration import (
    InspirationBox,
    Session,
    SessionConfig,
    generate_session,
    map_seed,
    summarize_nearest,
    summarize_textrank,
)
from .metrics import (
    JudgedRanking,
    average_precision,
    box_agreement,
    map_over_queries,
    mean_ndcg,
    ndcg,
    span_agreement,
)
from .pipeline import Bundle, build_bundle
from .rules import (
    ConceptGraph,
    Rule,
    build_graph,
    build_transactions,
    edge_provenance,
    mine_rules,
    neighbors,
)
from .search import (
    FacetQuery,
    SearchIndex,
    SearchResult,
    build_search_index,
    distance_avg,
    distance_maxmin,
    negative_filter,
    search,
)

__version__ = "0.1.0"

__all__ = [
    "Bundle",
    "Concept",
    "ConceptGraph",
    "ClusteringConfig",
    "Corpus",
    "CorpusError",
    "Document",
    "FacetQuery",
    "InspirationBox",
    "JudgedRanking",
    "Rule",
    "SearchIndex",
    "SearchResult",
    "Session",
    "SessionConfig",
    "Span",
    "SpanEmbedder",
    "SpanVector",
    "WordVectorTable",
    "average_precision",
    "box_agreement",
    "build_bundle",
    "build_concepts",
    "build_graph",
    "build_search_index",
    "build_transactions",
    "distance_avg",
    "distance_maxmin",
    "edge_provenance",
    "generate_session",
    "heuristic_extract",
    "iob_to_spans",
    "kmeans_pp",
    "load_corpus",
    "load_precomputed_span_vectors",
    "load_stopwords",
    "load_vectors",
    "map_over_queries",
    "map_seed",
    "mean_ndcg",
    "mine_rules",
    "ndcg",
    "negative_filter",
    "neighbors",
    "precision_at_k",
    "save_corpus",
    "score_extraction",
    "search",
    "select_k",
    "silhouette",
    "spans_to_iob",
    "summarize_nearest",
    "summarize_textrank",
    "tokenize",
]
