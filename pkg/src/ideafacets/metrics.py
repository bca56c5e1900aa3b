"""Ranking-quality metrics and inspiration-study agreement statistics.

Average precision uses the pooled-judgment convention: the denominator
is the number of relevant documents in the judged pool, since only the
top results of each method get judged.  NDCG uses binary gains with the
log2(i+1) position discount.  Queries with no relevant document are
undefined and skipped (a switch scores them 0 instead).

Agreement statistics summarize rater marks over inspiration sessions:
the proportion of displayed spans marked by at least ``min_raters``
raters, and the proportion of boxes with at least ``min_spans`` such
spans, both reported per condition.
"""

from __future__ import annotations

import json
import logging
import math
from collections import defaultdict
from dataclasses import dataclass, field

from .inspiration import Session

log = logging.getLogger(__name__)


class MetricError(ValueError):
    """Unscorable metric input."""


@dataclass(frozen=True)
class JudgedRanking:
    query_id: str
    ranked: tuple[str, ...]
    relevance: dict[str, int]
    cutoff: int = 20

    def __post_init__(self):
        if len(set(self.ranked)) != len(self.ranked):
            raise MetricError(f"query {self.query_id!r}: ranked list contains duplicates")
        if self.cutoff < 1:
            raise MetricError("cutoff must be >= 1")

    @property
    def total_relevant(self) -> int:
        return sum(1 for v in self.relevance.values() if v)


def average_precision(ranking: JudgedRanking) -> float:
    """Mean of precision@rank over relevant ranks within the cutoff,
    divided by the judged-pool relevant count."""
    total = ranking.total_relevant
    if total == 0:
        raise MetricError(f"query {ranking.query_id!r} has no relevant document; AP undefined")
    hits = 0
    precision_sum = 0.0
    for i, doc_id in enumerate(ranking.ranked[: ranking.cutoff], start=1):
        if ranking.relevance.get(doc_id, 0):
            hits += 1
            precision_sum += hits / i
    return precision_sum / total


def ndcg(ranking: JudgedRanking) -> float:
    """Binary-gain NDCG at the ranking cutoff."""
    total = ranking.total_relevant
    if total == 0:
        raise MetricError(f"query {ranking.query_id!r} has no relevant document; NDCG undefined")
    dcg = 0.0
    for i, doc_id in enumerate(ranking.ranked[: ranking.cutoff], start=1):
        if ranking.relevance.get(doc_id, 0):
            dcg += 1.0 / math.log2(i + 1)
    ideal = sum(1.0 / math.log2(i + 1) for i in range(1, min(total, ranking.cutoff) + 1))
    return dcg / ideal if ideal > 0 else 0.0


def map_over_queries(rankings: list[JudgedRanking], zero_relevant: str = "skip") -> float:
    """Arithmetic mean of per-query AP.

    ``zero_relevant`` chooses how to treat queries with no relevant
    document: "skip" (default, with a warning) or "zero".
    """
    if zero_relevant not in ("skip", "zero"):
        raise MetricError(f"unknown zero_relevant policy {zero_relevant!r}")
    values = []
    for ranking in rankings:
        if ranking.total_relevant == 0:
            if zero_relevant == "zero":
                values.append(0.0)
            else:
                log.warning("query %r has no relevant document; skipped", ranking.query_id)
            continue
        values.append(average_precision(ranking))
    if not values:
        raise MetricError("no scoreable queries")
    return sum(values) / len(values)


def mean_ndcg(rankings: list[JudgedRanking], zero_relevant: str = "skip") -> float:
    values = []
    for ranking in rankings:
        if ranking.total_relevant == 0:
            if zero_relevant == "zero":
                values.append(0.0)
            continue
        values.append(ndcg(ranking))
    if not values:
        raise MetricError("no scoreable queries")
    return sum(values) / len(values)


def load_judgments(path) -> dict[str, list[JudgedRanking]]:
    """Read a judgments file (JSONL {query_id, doc_id, relevant, method})
    into per-method ranking lists; record order within (method, query)
    is the ranking order.  An optional ``rank`` field overrides order."""
    rows: dict[tuple[str, str], list[tuple[int, str, int]]] = defaultdict(list)
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            key = (str(rec.get("method", "default")), str(rec["query_id"]))
            rank = int(rec.get("rank", len(rows[key])))
            rows[key].append((rank, str(rec["doc_id"]), int(rec["relevant"])))
    by_method: dict[str, list[JudgedRanking]] = defaultdict(list)
    for (method, query_id), triples in rows.items():
        triples.sort()
        ranked = tuple(doc_id for _, doc_id, _ in triples)
        relevance = {doc_id: rel for _, doc_id, rel in triples}
        by_method[method].append(JudgedRanking(query_id=query_id, ranked=ranked, relevance=relevance))
    return dict(by_method)


@dataclass(frozen=True)
class MarkRecord:
    session_id: str
    rater_id: str
    marked: tuple[tuple[int, int], ...]  # (box_index, span_index) pairs
    comments: dict[str, str] = field(default_factory=dict)


def load_marks(path) -> list[MarkRecord]:
    records = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            records.append(
                MarkRecord(
                    session_id=str(rec["session_id"]),
                    rater_id=str(rec["rater_id"]),
                    marked=tuple((int(m["box_index"]), int(m["span_index"])) for m in rec["marked"]),
                    comments={str(k): str(v) for k, v in rec.get("comments", {}).items()},
                )
            )
    return records


def _mark_counts(
    sessions: dict[str, Session], marks: list[MarkRecord]
) -> dict[tuple[str, int, int], set[str]]:
    """(session, box, span) -> set of rater ids that marked it."""
    if not marks:
        raise MetricError("no marks to aggregate")
    counts: dict[tuple[str, int, int], set[str]] = defaultdict(set)
    for record in marks:
        session = sessions.get(record.session_id)
        if session is None:
            raise MetricError(f"marks reference unknown session {record.session_id!r}")
        for box_idx, span_idx in record.marked:
            if box_idx >= len(session.boxes) or span_idx >= len(session.boxes[box_idx].spans):
                raise MetricError(
                    f"mark ({box_idx}, {span_idx}) outside session {record.session_id!r} bounds"
                )
            counts[(record.session_id, box_idx, span_idx)].add(record.rater_id)
    return counts


def span_agreement(
    sessions: dict[str, Session], marks: list[MarkRecord], min_raters: int = 2
) -> dict[str, float]:
    """Per condition, the proportion of displayed spans marked by at
    least ``min_raters`` raters."""
    counts = _mark_counts(sessions, marks)
    shown: dict[str, int] = defaultdict(int)
    agreed: dict[str, int] = defaultdict(int)
    for session in sessions.values():
        for box_idx, box in enumerate(session.boxes):
            shown[box.condition] += len(box.spans)
            for span_idx in range(len(box.spans)):
                raters = counts.get((session.session_id, box_idx, span_idx), set())
                if len(raters) >= min_raters:
                    agreed[box.condition] += 1
    return {cond: (agreed[cond] / shown[cond] if shown[cond] else 0.0) for cond in shown}


def box_agreement(
    sessions: dict[str, Session],
    marks: list[MarkRecord],
    min_raters: int = 2,
    min_spans: int = 2,
) -> dict[str, float]:
    """Per condition, the proportion of boxes with at least ``min_spans``
    spans each marked by at least ``min_raters`` raters."""
    counts = _mark_counts(sessions, marks)
    shown: dict[str, int] = defaultdict(int)
    agreed: dict[str, int] = defaultdict(int)
    for session in sessions.values():
        for box_idx, box in enumerate(session.boxes):
            shown[box.condition] += 1
            qualifying = sum(
                1
                for span_idx in range(len(box.spans))
                if len(counts.get((session.session_id, box_idx, span_idx), set())) >= min_raters
            )
            if qualifying >= min_spans:
                agreed[box.condition] += 1
    return {cond: (agreed[cond] / shown[cond] if shown[cond] else 0.0) for cond in shown}
