"""Word vectors and unit-norm span embeddings.

A span embedding is the mean of its in-vocabulary, non-stopword token
vectors, L2-normalized after averaging (raw word vectors in, unit span
vector out).  Spans whose tokens are all misses embed to the zero vector
with ``oov`` set; such vectors match nothing (dot product 0) and are
excluded from set means downstream.

The word-vector file is the common pretrained-embedding text layout:
one token followed by ``dim`` floats per line, whitespace-separated.
Precomputed span vectors (e.g. from an external contextual encoder) can
override table-based embeddings per span.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .corpus import Corpus, Span, tokenize

log = logging.getLogger(__name__)

_NORM_TOL = 1e-9


class EmbeddingError(ValueError):
    """Unusable word-vector or span-vector input."""


def load_stopwords() -> frozenset[str]:
    """The fixed English stopword list bundled with the package."""
    text = resources.files("ideafacets").joinpath("data/stopwords.txt").read_text("utf-8")
    return frozenset(w.strip() for w in text.splitlines() if w.strip() and not w.startswith("#"))


@dataclass(frozen=True)
class SpanVector:
    """Unit-norm embedding of one span (or query chunk)."""

    vector: np.ndarray
    oov: bool = False

    def __post_init__(self):
        norm = float(np.linalg.norm(self.vector))
        if self.oov:
            if norm != 0.0:
                raise EmbeddingError("oov span vector must be the zero vector")
        elif abs(norm - 1.0) > _NORM_TOL:
            raise EmbeddingError(f"span vector norm {norm} outside unit tolerance")

    @property
    def dim(self) -> int:
        return int(self.vector.shape[0])


class WordVectorTable:
    """Case-insensitive token -> vector lookup, fixed dimension."""

    def __init__(self, dim: int, entries: dict[str, np.ndarray], skipped_lines: int = 0):
        self.dim = dim
        self._entries = entries
        self.skipped_lines = skipped_lines

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, token: str) -> bool:
        return token.lower() in self._entries

    def get(self, token: str) -> np.ndarray | None:
        return self._entries.get(token.lower())

    def items(self):
        return self._entries.items()


def load_vectors(path: str | Path, dim: int) -> WordVectorTable:
    """Load a word-vector text file, rejecting lines with wrong arity.

    Raises :class:`EmbeddingError` if the file is unreadable or contains
    no valid line.
    """
    entries: dict[str, np.ndarray] = {}
    skipped = 0
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            parts = line.split()
            if not parts:
                continue
            if len(parts) != dim + 1:
                skipped += 1
                continue
            try:
                vec = np.array([float(x) for x in parts[1:]], dtype=np.float64)
            except ValueError:
                skipped += 1
                continue
            entries[parts[0].lower()] = vec
    if not entries:
        raise EmbeddingError(f"{path}: no valid {dim}-dimensional vector lines")
    if skipped:
        log.warning("%s: skipped %d malformed vector lines", path, skipped)
    return WordVectorTable(dim=dim, entries=entries, skipped_lines=skipped)


class SpanEmbedder:
    """Embeds raw text and corpus spans against one word-vector table."""

    def __init__(
        self,
        table: WordVectorTable,
        stopwords: frozenset[str] | None = None,
        normalize_words: bool = False,
    ):
        self.table = table
        self.stopwords = load_stopwords() if stopwords is None else stopwords
        # Optional switch: normalize each word vector before averaging
        # instead of only normalizing the span average.
        self.normalize_words = normalize_words

    @property
    def dim(self) -> int:
        return self.table.dim

    def embed_text(self, text: str) -> SpanVector:
        vectors = []
        for token in tokenize(text):
            word = token.surface.lower()
            if word in self.stopwords:
                continue
            vec = self.table.get(word)
            if vec is None:
                continue
            if self.normalize_words:
                norm = np.linalg.norm(vec)
                vec = vec / norm if norm > 0 else vec
            vectors.append(vec)
        if not vectors:
            return SpanVector(np.zeros(self.dim), oov=True)
        mean = np.mean(vectors, axis=0)
        norm = float(np.linalg.norm(mean))
        if norm == 0.0:
            return SpanVector(np.zeros(self.dim), oov=True)
        return SpanVector(mean / norm)

    def embed_span(self, span: Span) -> SpanVector:
        return self.embed_text(span.surface)

    def embed_corpus(
        self,
        corpus: Corpus,
        overrides: dict[str, SpanVector] | None = None,
    ) -> dict[str, SpanVector]:
        """Span-id -> SpanVector for every span in the corpus.

        ``overrides`` (precomputed vectors) take precedence over the
        table-based embedding for the spans they cover.
        """
        out: dict[str, SpanVector] = {}
        for span_id, span in corpus.spans_with_ids():
            if overrides and span_id in overrides:
                out[span_id] = overrides[span_id]
            else:
                out[span_id] = self.embed_span(span)
        return out


def load_precomputed_span_vectors(
    path: str | Path, corpus: Corpus | None = None
) -> dict[str, SpanVector]:
    """Load externally computed span vectors, L2-normalizing on load.

    Records are JSONL ``{"doc_id": ..., "span_index": ..., "vector": [...]}``.
    All vectors must share one dimension; references to unknown spans are
    reported and skipped when a corpus is supplied.
    """
    out: dict[str, SpanVector] = {}
    dim: int | None = None
    skipped_refs = 0
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            record = json.loads(line)
            vec = np.array(record["vector"], dtype=np.float64)
            if dim is None:
                dim = vec.shape[0]
            elif vec.shape[0] != dim:
                raise EmbeddingError(
                    f"{path}: line {lineno}: vector of dim {vec.shape[0]}, expected {dim}"
                )
            span_id = f"{record['doc_id']}:{int(record['span_index'])}"
            if corpus is not None:
                doc_id = str(record["doc_id"])
                if doc_id not in corpus or int(record["span_index"]) >= len(
                    corpus.get(doc_id).spans
                ):
                    skipped_refs += 1
                    continue
            norm = float(np.linalg.norm(vec))
            if norm == 0.0:
                out[span_id] = SpanVector(np.zeros(dim), oov=True)
            else:
                out[span_id] = SpanVector(vec / norm)
    if skipped_refs:
        log.warning("%s: skipped %d records referencing unknown spans", path, skipped_refs)
    return out
