"""Association-rule mining over product-level concept co-occurrence and
the resulting functional concept graph.

One transaction per document: the deduplicated set of concepts (both
kinds pooled) whose member spans occur in it.  Apriori-style frequent
pair counting yields singleton => singleton rules weighted by confidence
n(A and B) / n(A).  Rule direction types the edges: a one-directional
high-confidence pair reads as a sub-relation, a bi-directional one as
abstract similarity, cross-kind pairs as functionality, and remaining
pairs as plain co-occurrence.  Every edge carries the supporting doc
ids, so any relation can be traced back to the products it came from.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .clustering import Concept
from .corpus import Corpus

REL_SUB = "sub"
REL_SIMILAR = "similar"
REL_FUNCTIONALITY = "functionality"
REL_COOCCUR = "cooccur"


class MiningError(ValueError):
    """Unusable mining input."""


@dataclass(frozen=True)
class Transaction:
    doc_id: str
    concept_ids: frozenset[str]


@dataclass(frozen=True)
class Rule:
    antecedent: str
    consequent: str
    support_count: int
    antecedent_count: int
    confidence: float


@dataclass(frozen=True)
class Edge:
    source: str
    target: str
    confidence: float
    support_count: int
    relation: str
    provenance: tuple[str, ...]  # doc ids containing spans of both concepts


class ConceptGraph:
    """Immutable directed graph over concepts with confidence-weighted,
    provenance-carrying edges."""

    def __init__(self, concepts: list[Concept], edges: list[Edge]):
        self.concepts = {c.id: c for c in concepts}
        self.edges = list(edges)
        self._out: dict[str, list[Edge]] = {c.id: [] for c in concepts}
        self._in: dict[str, list[Edge]] = {c.id: [] for c in concepts}
        self._by_pair: dict[tuple[str, str], Edge] = {}
        for edge in edges:
            if edge.source not in self.concepts or edge.target not in self.concepts:
                raise MiningError(f"edge {edge.source}->{edge.target} references unknown concept")
            self._out[edge.source].append(edge)
            self._in[edge.target].append(edge)
            self._by_pair[(edge.source, edge.target)] = edge

    def out_edges(self, concept_id: str) -> list[Edge]:
        self._require(concept_id)
        return list(self._out[concept_id])

    def in_edges(self, concept_id: str) -> list[Edge]:
        self._require(concept_id)
        return list(self._in[concept_id])

    def edge(self, source: str, target: str) -> Edge:
        try:
            return self._by_pair[(source, target)]
        except KeyError:
            raise MiningError(f"no edge {source}->{target}") from None

    def _require(self, concept_id: str) -> None:
        if concept_id not in self.concepts:
            raise MiningError(f"unknown concept {concept_id!r}")


def build_transactions(corpus: Corpus, assignments: dict[str, str]) -> list[Transaction]:
    """One transaction per document; concepts deduplicated; documents
    without spans keep empty transactions so confidence denominators
    reflect the whole corpus."""
    transactions = []
    for doc in corpus:
        concept_ids = set()
        for i in range(len(doc.spans)):
            span_id = f"{doc.id}:{i}"
            try:
                concept_ids.add(assignments[span_id])
            except KeyError:
                raise MiningError(f"span {span_id} is not assigned to any concept") from None
        transactions.append(Transaction(doc_id=doc.id, concept_ids=frozenset(concept_ids)))
    return transactions


def mine_rules(
    transactions: list[Transaction],
    min_support_count: int = 3,
    min_confidence: float = 0.5,
) -> list[Rule]:
    """Apriori at pair level: count frequent singletons, then frequent
    pairs among them, then emit both rule directions that clear the
    support and confidence thresholds.

    Ordering is deterministic: confidence desc, support desc, then ids.
    """
    if not transactions:
        raise MiningError("no transactions to mine")
    if min_support_count < 1:
        raise MiningError("min_support_count must be >= 1")
    if not 0.0 < min_confidence <= 1.0:
        raise MiningError("min_confidence must be in (0, 1]")
    item_counts: Counter = Counter()
    for t in transactions:
        item_counts.update(t.concept_ids)
    frequent = {c for c, n in item_counts.items() if n >= min_support_count}
    pair_counts: Counter = Counter()
    for t in transactions:
        members = sorted(c for c in t.concept_ids if c in frequent)
        for a, b in combinations(members, 2):
            pair_counts[(a, b)] += 1
    rules = []
    for (a, b), support in pair_counts.items():
        if support < min_support_count:
            continue
        for antecedent, consequent in ((a, b), (b, a)):
            confidence = support / item_counts[antecedent]
            if confidence >= min_confidence:
                rules.append(
                    Rule(
                        antecedent=antecedent,
                        consequent=consequent,
                        support_count=support,
                        antecedent_count=item_counts[antecedent],
                        confidence=confidence,
                    )
                )
    rules.sort(key=lambda r: (-r.confidence, -r.support_count, r.antecedent, r.consequent))
    return rules


def build_graph(
    rules: list[Rule],
    concepts: list[Concept],
    transactions: list[Transaction],
    type_threshold: float = 0.6,
) -> ConceptGraph:
    """Assemble the concept graph, typing each retained rule.

    Same-kind pairs: both directions at or above the threshold become a
    ``similar`` edge pair; a single direction at or above it becomes a
    ``sub`` edge; the rest are ``cooccur``.  Cross-kind rules are
    ``functionality``.
    """
    if not 0.0 < type_threshold <= 1.0:
        raise MiningError("type_threshold must be in (0, 1]")
    kind_of = {c.id: c.kind for c in concepts}
    conf = {(r.antecedent, r.consequent): r.confidence for r in rules}
    edges = []
    for rule in rules:
        a, b = rule.antecedent, rule.consequent
        if kind_of[a] != kind_of[b]:
            relation = REL_FUNCTIONALITY
        else:
            forward = rule.confidence >= type_threshold
            backward = conf.get((b, a), 0.0) >= type_threshold
            if forward and backward:
                relation = REL_SIMILAR
            elif forward:
                relation = REL_SUB
            else:
                relation = REL_COOCCUR
        provenance = tuple(
            t.doc_id for t in transactions if a in t.concept_ids and b in t.concept_ids
        )
        edges.append(
            Edge(
                source=a,
                target=b,
                confidence=rule.confidence,
                support_count=rule.support_count,
                relation=relation,
                provenance=provenance,
            )
        )
    return ConceptGraph(concepts, edges)


def neighbors(
    graph: ConceptGraph,
    concept_id: str,
    direction: str = "out",
    top_r: int = 3,
) -> list[Edge]:
    """Edges around a node ranked by confidence desc (ties by the far
    node's id), truncated to ``top_r``."""
    if direction not in ("in", "out", "both"):
        raise MiningError(f"unknown direction {direction!r}")
    edges: list[Edge] = []
    if direction in ("out", "both"):
        edges.extend(graph.out_edges(concept_id))
    if direction in ("in", "both"):
        edges.extend(graph.in_edges(concept_id))
    far = lambda e: e.target if e.source == concept_id else e.source
    edges.sort(key=lambda e: (-e.confidence, far(e)))
    return edges[:top_r]


def edge_provenance(graph: ConceptGraph, source: str, target: str, corpus: Corpus) -> list[dict]:
    """Per supporting document, one representative span pair (one member
    span of each endpoint concept found in that document)."""
    edge = graph.edge(source, target)
    src_members = set(graph.concepts[source].member_span_ids)
    dst_members = set(graph.concepts[target].member_span_ids)
    out = []
    for doc_id in edge.provenance:
        doc = corpus.get(doc_id)
        doc_span_ids = [f"{doc_id}:{i}" for i in range(len(doc.spans))]
        src_hit = next(s for s in doc_span_ids if s in src_members)
        dst_hit = next(s for s in doc_span_ids if s in dst_members)
        out.append({"doc_id": doc_id, "source_span": src_hit, "target_span": dst_hit})
    return out


def graph_to_records(graph: ConceptGraph) -> list[dict]:
    """Deterministic line-record serialization (nodes then edges)."""
    records = []
    for cid in sorted(graph.concepts):
        c = graph.concepts[cid]
        records.append(
            {
                "type": "node",
                "id": c.id,
                "kind": c.kind,
                "member_span_ids": list(c.member_span_ids),
                "centroid": [float(x) for x in c.centroid],
                "title_spans": list(c.title_spans),
            }
        )
    for e in sorted(graph.edges, key=lambda e: (e.source, e.target)):
        records.append(
            {
                "type": "edge",
                "source": e.source,
                "target": e.target,
                "confidence": e.confidence,
                "support_count": e.support_count,
                "relation": e.relation,
                "provenance": list(e.provenance),
            }
        )
    return records


def graph_from_records(records: list[dict]) -> ConceptGraph:
    concepts, edges = [], []
    for rec in records:
        if rec["type"] == "node":
            concepts.append(
                Concept(
                    id=rec["id"],
                    kind=rec["kind"],
                    member_span_ids=tuple(rec["member_span_ids"]),
                    centroid=np.array(rec["centroid"], dtype=np.float64),
                    title_spans=tuple(rec["title_spans"]),
                )
            )
        elif rec["type"] == "edge":
            edges.append(
                Edge(
                    source=rec["source"],
                    target=rec["target"],
                    confidence=rec["confidence"],
                    support_count=rec["support_count"],
                    relation=rec["relation"],
                    provenance=tuple(rec["provenance"]),
                )
            )
    return ConceptGraph(concepts, edges)


def graph_to_dot(graph: ConceptGraph) -> str:
    """Export in Graphviz DOT for external visualization."""
    lines = ["digraph concepts {"]
    for cid in sorted(graph.concepts):
        c = graph.concepts[cid]
        title = "; ".join(c.title_spans)
        lines.append(f'  "{cid}" [label={json.dumps(f"{cid}: {title}")}];')
    for e in sorted(graph.edges, key=lambda e: (e.source, e.target)):
        lines.append(
            f'  "{e.source}" -> "{e.target}" '
            f'[label="{e.relation} {e.confidence:.2f}", weight={e.support_count}];'
        )
    lines.append("}")
    return "\n".join(lines) + "\n"
