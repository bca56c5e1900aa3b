"""Corpus data model and ingestion.

Documents are short product/idea texts carrying labeled purpose and
mechanism character spans.  Offsets are Unicode code points so the same
record is valid regardless of encoding width; spans may overlap freely
(annotators tag without coordination).  A corpus is immutable after load
and safe for concurrent reads.

File format: UTF-8 JSON Lines, one document per line::

    {"id": "...", "title": "...", "text": "...",
     "spans": [{"start": 0, "end": 5, "label": "purpose"}, ...],
     "source": "bronze"}
"""

from __future__ import annotations

import json
import unicodedata
from dataclasses import dataclass, field
from pathlib import Path

PURPOSE = "purpose"
MECHANISM = "mechanism"
LABELS = (PURPOSE, MECHANISM)

SOURCE_TAGS = ("bronze", "gold", "predicted", "heuristic")


class CorpusError(ValueError):
    """Malformed corpus file or record."""


@dataclass(frozen=True)
class Span:
    """A labeled contiguous substring, addressed by code-point offsets."""

    label: str
    start: int
    end: int
    surface: str
    confidence: float | None = None

    def validate(self, text: str, doc_id: str) -> None:
        if self.label not in LABELS:
            raise CorpusError(f"document {doc_id!r}: unknown span label {self.label!r}")
        if not (0 <= self.start < self.end <= len(text)):
            raise CorpusError(
                f"document {doc_id!r}: span [{self.start}, {self.end}) out of range "
                f"for text of length {len(text)}"
            )
        if self.surface != text[self.start : self.end]:
            raise CorpusError(
                f"document {doc_id!r}: span surface {self.surface!r} does not match "
                f"text slice {text[self.start:self.end]!r}"
            )


@dataclass(frozen=True)
class Document:
    id: str
    title: str
    text: str
    spans: tuple[Span, ...]
    source_tag: str = "bronze"

    def validate(self) -> None:
        if not self.id:
            raise CorpusError("document with empty id")
        if self.source_tag not in SOURCE_TAGS:
            raise CorpusError(f"document {self.id!r}: unknown source tag {self.source_tag!r}")
        for span in self.spans:
            span.validate(self.text, self.id)

    def spans_of(self, label: str) -> tuple[Span, ...]:
        return tuple(s for s in self.spans if s.label == label)


@dataclass(frozen=True)
class CorpusStats:
    documents: int
    purpose_spans: int
    mechanism_spans: int
    tokens: int
    token_shares: dict[str, float] = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "documents": self.documents,
            "purpose_spans": self.purpose_spans,
            "mechanism_spans": self.mechanism_spans,
            "tokens": self.tokens,
            "token_shares": dict(self.token_shares),
        }


class Corpus:
    """Ordered, id-indexed collection of validated documents."""

    def __init__(self, documents: list[Document]):
        self._docs: list[Document] = []
        self._by_id: dict[str, Document] = {}
        for doc in documents:
            doc.validate()
            if doc.id in self._by_id:
                raise CorpusError(f"duplicate document id {doc.id!r}")
            self._docs.append(doc)
            self._by_id[doc.id] = doc

    def __len__(self) -> int:
        return len(self._docs)

    def __iter__(self):
        return iter(self._docs)

    def __contains__(self, doc_id: str) -> bool:
        return doc_id in self._by_id

    def get(self, doc_id: str) -> Document:
        try:
            return self._by_id[doc_id]
        except KeyError:
            raise KeyError(f"no document with id {doc_id!r}") from None

    @property
    def doc_ids(self) -> list[str]:
        return [d.id for d in self._docs]

    def spans_with_ids(self, label: str | None = None) -> list[tuple[str, Span]]:
        """All (span_id, span) pairs, optionally restricted to one label.

        Span ids are ``"<doc_id>:<index>"`` where index is the span's
        position in the document's span list.
        """
        out = []
        for doc in self._docs:
            for i, span in enumerate(doc.spans):
                if label is None or span.label == label:
                    out.append((f"{doc.id}:{i}", span))
        return out

    def resolve_span(self, span_id: str) -> tuple[Document, Span]:
        doc_id, _, idx = span_id.rpartition(":")
        doc = self.get(doc_id)
        return doc, doc.spans[int(idx)]

    def stats(self) -> CorpusStats:
        purpose = sum(len(d.spans_of(PURPOSE)) for d in self._docs)
        mechanism = sum(len(d.spans_of(MECHANISM)) for d in self._docs)
        total_tokens = 0
        labeled = {PURPOSE: 0, MECHANISM: 0}
        for doc in self._docs:
            tokens = tokenize(doc.text)
            total_tokens += len(tokens)
            for tok in tokens:
                label = _token_label(tok, doc.spans)
                if label is not None:
                    labeled[label] += 1
        shares = {}
        if total_tokens:
            shares = {
                PURPOSE: labeled[PURPOSE] / total_tokens,
                MECHANISM: labeled[MECHANISM] / total_tokens,
                "other": (total_tokens - labeled[PURPOSE] - labeled[MECHANISM]) / total_tokens,
            }
        return CorpusStats(
            documents=len(self._docs),
            purpose_spans=purpose,
            mechanism_spans=mechanism,
            tokens=total_tokens,
            token_shares=shares,
        )


@dataclass(frozen=True)
class Token:
    surface: str
    start: int
    end: int


def _is_punct(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def tokenize(text: str) -> list[Token]:
    """Deterministic whitespace split with leading/trailing punctuation
    detached as single-character tokens.  Intra-word punctuation (hyphens,
    apostrophes) stays attached, so "Wi-Fi" is one token.
    """
    tokens: list[Token] = []
    i, n = 0, len(text)
    while i < n:
        if text[i].isspace():
            i += 1
            continue
        j = i
        while j < n and not text[j].isspace():
            j += 1
        lo, hi = i, j
        while lo < hi and _is_punct(text[lo]):
            tokens.append(Token(text[lo], lo, lo + 1))
            lo += 1
        trailing: list[Token] = []
        while hi > lo and _is_punct(text[hi - 1]):
            trailing.append(Token(text[hi - 1], hi - 1, hi))
            hi -= 1
        if lo < hi:
            tokens.append(Token(text[lo:hi], lo, hi))
        tokens.extend(reversed(trailing))
        i = j
    return tokens


def _token_label(token: Token, spans: tuple[Span, ...]) -> str | None:
    """Label of the highest-precedence span whose range contains the token
    start (purpose beats mechanism, earlier span start wins within a label).
    """
    best: Span | None = None
    for span in spans:
        if span.start <= token.start < span.end:
            if best is None or _span_precedence(span) < _span_precedence(best):
                best = span
    return best.label if best else None


def _span_precedence(span: Span) -> tuple[int, int, int]:
    return (0 if span.label == PURPOSE else 1, span.start, -(span.end - span.start))


def parse_document(record: dict) -> Document:
    """Build a Document from one decoded JSON record, computing surfaces."""
    try:
        doc_id = record["id"]
        text = record["text"]
    except KeyError as exc:
        raise CorpusError(f"record missing required field {exc}") from None
    spans = []
    for raw in record.get("spans", []):
        start, end = int(raw["start"]), int(raw["end"])
        if not (0 <= start < end <= len(text)):
            raise CorpusError(
                f"document {doc_id!r}: span [{start}, {end}) out of range "
                f"for text of length {len(text)}"
            )
        spans.append(
            Span(
                label=str(raw["label"]).lower(),
                start=start,
                end=end,
                surface=text[start:end],
                confidence=raw.get("confidence"),
            )
        )
    return Document(
        id=str(doc_id),
        title=str(record.get("title", "")),
        text=text,
        spans=tuple(spans),
        source_tag=str(record.get("source", "bronze")),
    )


def document_to_record(doc: Document) -> dict:
    record = {
        "id": doc.id,
        "title": doc.title,
        "text": doc.text,
        "spans": [
            {
                "start": s.start,
                "end": s.end,
                "label": s.label,
                **({"confidence": s.confidence} if s.confidence is not None else {}),
            }
            for s in doc.spans
        ],
        "source": doc.source_tag,
    }
    return record


def load_corpus(path: str | Path) -> tuple[Corpus, CorpusStats]:
    """Load and validate a JSONL corpus file; returns (corpus, stats).

    Raises :class:`CorpusError` naming the offending line or document on
    malformed records, out-of-range spans, or duplicate ids.
    """
    documents = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"{path}: line {lineno}: invalid JSON ({exc.msg})") from None
            try:
                documents.append(parse_document(record))
            except CorpusError as exc:
                raise CorpusError(f"{path}: line {lineno}: {exc}") from None
    corpus = Corpus(documents)
    return corpus, corpus.stats()


def save_corpus(corpus: Corpus, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for doc in corpus:
            fh.write(json.dumps(document_to_record(doc), ensure_ascii=False, sort_keys=True))
            fh.write("\n")
