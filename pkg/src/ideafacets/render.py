"""Shared JSON-able views of engine objects.

The CLI and the HTTP API both serialize through these helpers, so a
search issued over either surface produces the identical payload.
"""

from __future__ import annotations

from .clustering import Concept
from .corpus import Document, document_to_record
from .extraction import ExtractionReport
from .rules import Edge
from .search import SearchResponse, SearchResult


def search_result_to_dict(result: SearchResult) -> dict:
    return {
        "doc_id": result.doc_id,
        "score": result.score,
        "purpose_distance": result.purpose_distance,
        "mechanism_distance": result.mechanism_distance,
        "matched_spans": [
            {
                "chunk": m.chunk,
                "side": m.side,
                "span_id": m.span_id,
                "similarity": m.similarity,
            }
            for m in result.matched_spans
        ],
    }


def search_response_to_dict(response: SearchResponse, build_id: str) -> dict:
    return {
        "build_id": build_id,
        "over_constrained": response.over_constrained,
        "excluded_doc_ids": list(response.excluded_doc_ids),
        "results": [search_result_to_dict(r) for r in response.results],
    }


def document_to_dict(doc: Document) -> dict:
    return document_to_record(doc)


def concept_to_dict(concept: Concept, full: bool = True) -> dict:
    out = {
        "id": concept.id,
        "kind": concept.kind,
        "size": concept.size,
        "title_spans": list(concept.title_spans),
    }
    if full:
        out["member_span_ids"] = list(concept.member_span_ids)
        out["centroid"] = [float(x) for x in concept.centroid]
    return out


def edge_to_dict(edge: Edge) -> dict:
    return {
        "source": edge.source,
        "target": edge.target,
        "confidence": edge.confidence,
        "support_count": edge.support_count,
        "relation": edge.relation,
        "provenance": list(edge.provenance),
    }


def extraction_report_to_dict(report: ExtractionReport) -> dict:
    return report.as_dict()


def format_table(rows: list[dict], columns: list[str]) -> str:
    """Plain monospace table for human-readable CLI output."""
    if not rows:
        return "(no rows)"
    cells = [[_fmt(row.get(col)) for col in columns] for row in rows]
    widths = [
        max(len(columns[i]), max(len(row[i]) for row in cells)) for i in range(len(columns))
    ]
    header = "  ".join(col.ljust(widths[i]) for i, col in enumerate(columns))
    sep = "  ".join("-" * w for w in widths)
    body = "\n".join("  ".join(row[i].ljust(widths[i]) for i in range(len(columns))) for row in cells)
    return f"{header}\n{sep}\n{body}"


def _fmt(value) -> str:
    if value is None:
        return "-"
    if isinstance(value, float):
        return f"{value:.4f}"
    return str(value)
