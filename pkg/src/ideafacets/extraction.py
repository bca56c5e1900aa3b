"""Span-extractor plumbing: IOB codec, lexical heuristic extractor, scorers.

The engine consumes span annotations from any extractor.  This module
supplies the token-level IOB encoding used for scoring, a deliberately
simple cue-word extractor so the pipeline runs end to end without a
trained model, and the evaluation harness (per-label token P/R/F1,
micro F1, span-exact F1 as a diagnostic, and precision@K over
confidence-ranked predictions).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .corpus import LABELS, MECHANISM, PURPOSE, Corpus, Document, Span, Token, tokenize
from .embeddings import load_stopwords

IOB_LABELS = ("B-P", "I-P", "B-M", "I-M", "O")

_B = {PURPOSE: "B-P", MECHANISM: "B-M"}
_I = {PURPOSE: "I-P", MECHANISM: "I-M"}
_CLASS_OF = {"B-P": PURPOSE, "I-P": PURPOSE, "B-M": MECHANISM, "I-M": MECHANISM}

PURPOSE_CUES = ("so that", "for", "to", "helps", "allows")
MECHANISM_CUES = ("made of", "using", "with", "via", "by")
_MAX_RUN = 6


class ExtractionError(ValueError):
    """Prediction/gold inputs that cannot be scored."""


@dataclass(frozen=True)
class TokenLabelSequence:
    tokens: tuple[str, ...]
    labels: tuple[str, ...]

    def __post_init__(self):
        if len(self.tokens) != len(self.labels):
            raise ExtractionError("tokens and labels must have equal length")


@dataclass(frozen=True)
class ScoredPrediction:
    """One predicted span with a confidence used to order P@K."""

    span: Span
    confidence: float
    doc_id: str = ""


def spans_to_iob(doc: Document) -> TokenLabelSequence:
    """Encode a document's spans as token-level IOB labels.

    A token belongs to a span if its start offset lies inside the span.
    Overlaps resolve by precedence: purpose beats mechanism, earlier span
    start wins within a label.  Adjacent distinct spans keep separate B
    tags.
    """
    tokens = tokenize(doc.text)
    assigned: list[Span | None] = [_covering_span(tok, doc.spans) for tok in tokens]
    labels = []
    prev: Span | None = None
    for span in assigned:
        if span is None:
            labels.append("O")
        elif span is prev:
            labels.append(_I[span.label])
        else:
            labels.append(_B[span.label])
        prev = span
    return TokenLabelSequence(tuple(t.surface for t in tokens), tuple(labels))


def _covering_span(token: Token, spans: tuple[Span, ...]) -> Span | None:
    best = None
    best_key = None
    for span in spans:
        if span.start <= token.start < span.end:
            key = (0 if span.label == PURPOSE else 1, span.start, -(span.end - span.start))
            if best_key is None or key < best_key:
                best, best_key = span, key
    return best


def iob_to_spans(labels: list[str] | tuple[str, ...], text: str) -> tuple[list[Span], int]:
    """Decode IOB labels over ``tokenize(text)`` back into spans.

    Stray I-X (no preceding B-X/I-X of the same class) is repaired by
    treating it as B-X; the repair count is returned alongside the spans.
    """
    tokens = tokenize(text)
    if len(tokens) != len(labels):
        raise ExtractionError(
            f"label sequence of length {len(labels)} does not align with "
            f"{len(tokens)} tokens"
        )
    spans: list[Span] = []
    repairs = 0
    run_label: str | None = None
    run_start = run_end = 0
    for tok, label in zip(tokens, labels):
        if label == "O":
            if run_label is not None:
                spans.append(_make_span(run_label, run_start, run_end, text))
                run_label = None
            continue
        cls = _CLASS_OF[label]
        begins = label.startswith("B-")
        if not begins and cls != run_label:
            repairs += 1
            begins = True
        if begins:
            if run_label is not None:
                spans.append(_make_span(run_label, run_start, run_end, text))
            run_label, run_start, run_end = cls, tok.start, tok.end
        else:
            run_end = tok.end
    if run_label is not None:
        spans.append(_make_span(run_label, run_start, run_end, text))
    return spans, repairs


def _make_span(label: str, start: int, end: int, text: str) -> Span:
    return Span(label=label, start=start, end=end, surface=text[start:end])


def heuristic_extract(text: str, stopwords: frozenset[str] | None = None) -> list[ScoredPrediction]:
    """Cue-word extractor: the token run (non-stopword, non-punctuation,
    at most 6 tokens) following a purpose cue ("for", "to", ...) or a
    mechanism cue ("using", "with", ...) becomes a prediction with
    confidence 0.5 + 0.1 * min(run, 5)/5.
    """
    if stopwords is None:
        stopwords = load_stopwords()
    tokens = tokenize(text)
    lowered = [t.surface.lower() for t in tokens]
    predictions: list[ScoredPrediction] = []
    i = 0
    while i < len(tokens):
        label, cue_len = _match_cue(lowered, i)
        if label is None:
            i += 1
            continue
        run = []
        j = i + cue_len
        while j < len(tokens) and len(run) < _MAX_RUN:
            word = lowered[j]
            if word in stopwords or not any(ch.isalnum() for ch in word):
                break
            run.append(tokens[j])
            j += 1
        if run:
            span = Span(
                label=label,
                start=run[0].start,
                end=run[-1].end,
                surface=text[run[0].start : run[-1].end],
            )
            confidence = 0.5 + 0.1 * min(len(run), 5) / 5
            predictions.append(ScoredPrediction(span=span, confidence=confidence))
        i = i + cue_len
    return predictions


def _match_cue(lowered: list[str], i: int) -> tuple[str | None, int]:
    for cues, label in ((PURPOSE_CUES, PURPOSE), (MECHANISM_CUES, MECHANISM)):
        for cue in cues:
            parts = cue.split()
            if lowered[i : i + len(parts)] == parts:
                return label, len(parts)
    return None, 0


def extract_corpus(corpus: Corpus, stopwords: frozenset[str] | None = None) -> Corpus:
    """Run the heuristic extractor over a corpus, producing a predicted
    corpus (same ids/texts, heuristic spans with confidences)."""
    if stopwords is None:
        stopwords = load_stopwords()
    docs = []
    for doc in corpus:
        preds = heuristic_extract(doc.text, stopwords)
        spans = tuple(
            Span(p.span.label, p.span.start, p.span.end, p.span.surface, p.confidence)
            for p in preds
        )
        docs.append(
            Document(id=doc.id, title=doc.title, text=doc.text, spans=spans, source_tag="heuristic")
        )
    return Corpus(docs)


@dataclass(frozen=True)
class PRF:
    precision: float
    recall: float
    f1: float

    @staticmethod
    def from_counts(tp: int, pred: int, gold: int) -> "PRF":
        p = tp / pred if pred else 0.0
        r = tp / gold if gold else 0.0
        f = 2 * p * r / (p + r) if p + r else 0.0
        return PRF(p, r, f)


@dataclass(frozen=True)
class ExtractionReport:
    per_label: dict[str, PRF]
    micro: PRF
    span_exact: PRF
    token_counts: dict[str, tuple[int, int, int]] = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "per_label": {
                k: {"precision": v.precision, "recall": v.recall, "f1": v.f1}
                for k, v in self.per_label.items()
            },
            "micro": {"precision": self.micro.precision, "recall": self.micro.recall, "f1": self.micro.f1},
            "span_exact": {
                "precision": self.span_exact.precision,
                "recall": self.span_exact.recall,
                "f1": self.span_exact.f1,
            },
        }


def score_extraction(predicted: Corpus, gold: Corpus) -> ExtractionReport:
    """Token-level IOB scoring: B and I of a class pool into that class,
    micro F1 pools both classes.  Span-exact F1 (offset+label identity)
    is included as a secondary diagnostic.
    """
    pred_ids, gold_ids = set(predicted.doc_ids), set(gold.doc_ids)
    if pred_ids != gold_ids:
        missing = sorted(gold_ids ^ pred_ids)[:5]
        raise ExtractionError(f"document id mismatch between predicted and gold: {missing}")
    tp: Counter = Counter()
    pred_pos: Counter = Counter()
    gold_pos: Counter = Counter()
    span_tp = span_pred = span_gold = 0
    for doc_id in gold.doc_ids:
        gold_doc, pred_doc = gold.get(doc_id), predicted.get(doc_id)
        if gold_doc.text != pred_doc.text:
            raise ExtractionError(f"document {doc_id!r}: predicted and gold texts differ")
        gold_seq = spans_to_iob(gold_doc)
        pred_seq = spans_to_iob(pred_doc)
        for g_label, p_label in zip(gold_seq.labels, pred_seq.labels):
            g_cls = _CLASS_OF.get(g_label)
            p_cls = _CLASS_OF.get(p_label)
            if g_cls:
                gold_pos[g_cls] += 1
            if p_cls:
                pred_pos[p_cls] += 1
            if g_cls and g_cls == p_cls:
                tp[g_cls] += 1
        gold_triples = {(s.start, s.end, s.label) for s in gold_doc.spans}
        pred_triples = {(s.start, s.end, s.label) for s in pred_doc.spans}
        span_tp += len(gold_triples & pred_triples)
        span_pred += len(pred_triples)
        span_gold += len(gold_triples)
    per_label = {
        label: PRF.from_counts(tp[label], pred_pos[label], gold_pos[label]) for label in LABELS
    }
    micro = PRF.from_counts(sum(tp.values()), sum(pred_pos.values()), sum(gold_pos.values()))
    span_exact = PRF.from_counts(span_tp, span_pred, span_gold)
    counts = {label: (tp[label], pred_pos[label], gold_pos[label]) for label in LABELS}
    return ExtractionReport(per_label=per_label, micro=micro, span_exact=span_exact, token_counts=counts)


@dataclass(frozen=True)
class PrecisionAtK:
    value: float
    k_requested: int
    k_effective: int


def precision_at_k(predictions: list[ScoredPrediction], gold: Corpus, k: int) -> PrecisionAtK:
    """Fraction of the top-k confidence-ranked predictions whose token set
    overlaps a same-label gold span by Jaccard >= 0.5.

    Ties in confidence keep document/input order (stable sort).  If k
    exceeds the prediction count, all predictions are used and the
    effective k is reported.
    """
    if k < 1:
        raise ExtractionError("k must be >= 1")
    ranked = sorted(predictions, key=lambda p: -p.confidence)
    effective = min(k, len(ranked))
    if effective == 0:
        return PrecisionAtK(0.0, k, 0)
    hits = 0
    for pred in ranked[:effective]:
        if _matches_gold(pred, gold):
            hits += 1
    return PrecisionAtK(hits / effective, k, effective)


def _matches_gold(pred: ScoredPrediction, gold: Corpus) -> bool:
    if pred.doc_id not in gold:
        return False
    doc = gold.get(pred.doc_id)
    tokens = tokenize(doc.text)
    pred_idx = _token_indices(tokens, pred.span)
    if not pred_idx:
        return False
    for span in doc.spans:
        if span.label != pred.span.label:
            continue
        gold_idx = _token_indices(tokens, span)
        union = pred_idx | gold_idx
        if union and len(pred_idx & gold_idx) / len(union) >= 0.5:
            return True
    return False


def _token_indices(tokens: list[Token], span: Span) -> set[int]:
    return {i for i, tok in enumerate(tokens) if span.start <= tok.start < span.end}
