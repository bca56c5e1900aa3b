"""Offline index build and bundle persistence.

``build_bundle`` runs embed -> index -> cluster -> mine -> graph over a
corpus and writes a self-contained bundle directory:

    manifest.json       build id, config snapshot, seeds, digests
    corpus.jsonl        validated corpus copy
    vectors.txt         word-vector table copy
    span_vectors.jsonl  per-span unit vectors
    index.jsonl         per-product span-id sets
    concepts.jsonl      purpose and mechanism concepts
    rules.jsonl         mined rules
    graph.jsonl         concept-graph nodes and edges

Every artifact opens with a header record carrying the build id, and the
manifest records each artifact's SHA-256.  Loading verifies both, so a
bundle mixing files from two builds (or a corrupted file) is rejected.
Builds are deterministic given seeds; the manifest timestamp honors
SOURCE_DATE_EPOCH for byte-identical rebuilds.  A loaded bundle is an
immutable snapshot safe for concurrent queries.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import os
import shutil
import time
from pathlib import Path

import numpy as np

from .clustering import Concept, ClusteringConfig, ConceptBuildResult, build_concepts
from .config import EngineConfig
from .corpus import MECHANISM, PURPOSE, Corpus, load_corpus, save_corpus
from .embeddings import (
    SpanEmbedder,
    SpanVector,
    load_precomputed_span_vectors,
    load_vectors,
)
from .inspiration import Session, SessionConfig, generate_session
from .rules import (
    ConceptGraph,
    Rule,
    build_graph,
    build_transactions,
    graph_from_records,
    graph_to_records,
    mine_rules,
)
from .search import FacetQuery, SearchIndex, SearchResponse, build_search_index, search

BUNDLE_VERSION = 1
MANIFEST_NAME = "manifest.json"
ARTIFACT_NAMES = (
    "corpus.jsonl",
    "vectors.txt",
    "span_vectors.jsonl",
    "index.jsonl",
    "concepts.jsonl",
    "rules.jsonl",
    "graph.jsonl",
)
MARKS_NAME = "marks.jsonl"  # append-only rater marks; not digest-checked


class PipelineError(RuntimeError):
    """Build or load failure, tagged with the failing stage."""

    def __init__(self, stage: str, message: str):
        super().__init__(f"[{stage}] {message}")
        self.stage = stage


def _sha256_file(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _dump(record: dict) -> str:
    return json.dumps(record, ensure_ascii=False, sort_keys=True)


def _write_records(path: Path, build_id: str, records: list[dict]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(_dump({"build_id": build_id}) + "\n")
        for record in records:
            fh.write(_dump(record) + "\n")


def _read_records(path: Path, build_id: str) -> list[dict]:
    with open(path, encoding="utf-8") as fh:
        lines = [line for line in fh.read().splitlines() if line.strip()]
    if not lines:
        raise PipelineError("load", f"{path.name}: empty artifact")
    header = json.loads(lines[0])
    if header.get("build_id") != build_id:
        raise PipelineError(
            "load",
            f"{path.name}: build id {header.get('build_id')!r} does not match manifest {build_id!r}",
        )
    return [json.loads(line) for line in lines[1:]]


def _built_at() -> str:
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    stamp = int(epoch) if epoch else int(time.time())
    return time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime(stamp))


def build_bundle(
    corpus_path: str | Path,
    vectors_path: str | Path,
    out_dir: str | Path,
    config: EngineConfig = EngineConfig(),
    precomputed_path: str | Path | None = None,
    force: bool = False,
) -> dict:
    """Run the full pipeline and write a bundle directory; returns the
    manifest.  Partial outputs are removed on any stage failure."""
    out_dir = Path(out_dir)
    if out_dir.exists() and any(out_dir.iterdir()) and not force:
        raise PipelineError("setup", f"output directory {out_dir} exists; pass force to replace")
    tmp_dir = out_dir.parent / f".{out_dir.name}.building"
    if tmp_dir.exists():
        shutil.rmtree(tmp_dir)
    tmp_dir.mkdir(parents=True)
    try:
        manifest = _build_into(Path(corpus_path), Path(vectors_path), tmp_dir, config, precomputed_path)
        if out_dir.exists():
            shutil.rmtree(out_dir)
        os.rename(tmp_dir, out_dir)
        return manifest
    finally:
        if tmp_dir.exists():
            shutil.rmtree(tmp_dir)


def _build_into(
    corpus_path: Path,
    vectors_path: Path,
    out_dir: Path,
    config: EngineConfig,
    precomputed_path: str | Path | None,
) -> dict:
    def stage(name, fn, *args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except PipelineError:
            raise
        except Exception as exc:
            raise PipelineError(name, str(exc)) from exc

    corpus, _ = stage("ingest", load_corpus, corpus_path)
    table = stage("vectors", load_vectors, vectors_path, config.dim)
    embedder = SpanEmbedder(table, normalize_words=config.normalize_words)

    overrides: dict[str, SpanVector] | None = None
    if precomputed_path:
        overrides = stage("vectors", load_precomputed_span_vectors, precomputed_path, corpus)
    span_vectors = stage("embed", embedder.embed_corpus, corpus, overrides)

    cluster_results: dict[str, ConceptBuildResult] = {}
    for kind, explicit_k in ((PURPOSE, config.purpose_k), (MECHANISM, config.mechanism_k)):
        cluster_config = ClusteringConfig(
            k=explicit_k,
            k_grid=config.k_grid,
            seed=config.cluster_seed,
            max_iters=config.max_iters,
            tol=config.tol,
            silhouette_sample=config.silhouette_sample,
            selection=config.selection,
            title_count=config.title_count,
        )
        cluster_results[kind] = stage(
            "cluster", build_concepts, corpus, span_vectors, kind, cluster_config
        )
    concepts = list(cluster_results[PURPOSE].concepts) + list(cluster_results[MECHANISM].concepts)
    assignments = {}
    for result in cluster_results.values():
        assignments.update(result.assignments)

    transactions = stage("mine", build_transactions, corpus, assignments)
    rules = stage("mine", mine_rules, transactions, config.min_support, config.min_confidence)
    graph = stage("graph", build_graph, rules, concepts, transactions, config.type_threshold)

    corpus_digest = _sha256_file(corpus_path)
    vectors_digest = _sha256_file(vectors_path)
    build_id = hashlib.sha256(
        (corpus_digest + vectors_digest + _dump(config.as_dict())).encode("utf-8")
    ).hexdigest()[:16]

    def write_artifacts():
        save_corpus(corpus, out_dir / "corpus.jsonl")
        shutil.copyfile(vectors_path, out_dir / "vectors.txt")
        _write_records(
            out_dir / "span_vectors.jsonl",
            build_id,
            [
                {
                    "span_id": sid,
                    "vector": [float(x) for x in sv.vector],
                    "oov": sv.oov,
                }
                for sid, sv in sorted(span_vectors.items())
            ],
        )
        _write_records(
            out_dir / "index.jsonl",
            build_id,
            [
                {
                    "doc_id": doc.id,
                    "purpose_span_ids": [
                        f"{doc.id}:{i}" for i, s in enumerate(doc.spans) if s.label == PURPOSE
                    ],
                    "mechanism_span_ids": [
                        f"{doc.id}:{i}" for i, s in enumerate(doc.spans) if s.label == MECHANISM
                    ],
                }
                for doc in corpus
            ],
        )
        _write_records(
            out_dir / "concepts.jsonl",
            build_id,
            [
                {
                    "id": c.id,
                    "kind": c.kind,
                    "member_span_ids": list(c.member_span_ids),
                    "centroid": [float(x) for x in c.centroid],
                    "title_spans": list(c.title_spans),
                }
                for c in concepts
            ],
        )
        _write_records(
            out_dir / "rules.jsonl",
            build_id,
            [dataclasses.asdict(r) for r in rules],
        )
        _write_records(out_dir / "graph.jsonl", build_id, graph_to_records(graph))

    stage("write", write_artifacts)

    manifest = {
        "version": BUNDLE_VERSION,
        "build_id": build_id,
        "built_at": _built_at(),
        "corpus_digest": corpus_digest,
        "vectors_digest": vectors_digest,
        "config": config.as_dict(),
        "seeds": {"cluster_seed": config.cluster_seed, "session_seed": config.session_seed},
        "k_selection": {
            kind: (result.selection.as_dict() if result.selection else {"k": "explicit"})
            for kind, result in cluster_results.items()
        },
        "warnings": sorted(w for r in cluster_results.values() for w in r.warnings),
        "artifacts": {},
    }
    for name in ARTIFACT_NAMES:
        manifest["artifacts"][name] = _sha256_file(out_dir / name)
    with open(out_dir / MANIFEST_NAME, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(manifest, ensure_ascii=False, sort_keys=True, indent=2) + "\n")
    return manifest


class Bundle:
    """An immutable, fully materialized snapshot of one build.

    Both the CLI and the HTTP API answer queries through this object, so
    identical logical queries take the identical code path.
    """

    def __init__(self, bundle_dir: str | Path):
        bundle_dir = Path(bundle_dir)
        manifest_path = bundle_dir / MANIFEST_NAME
        if not manifest_path.exists():
            raise PipelineError("load", f"{bundle_dir} has no {MANIFEST_NAME}")
        with open(manifest_path, encoding="utf-8") as fh:
            self.manifest = json.load(fh)
        self.build_id: str = self.manifest["build_id"]
        self.dir = bundle_dir

        for name, expected in self.manifest["artifacts"].items():
            actual = _sha256_file(bundle_dir / name)
            if actual != expected:
                raise PipelineError("load", f"{name}: digest mismatch; bundle corrupted")

        corpus_digest = _sha256_file(bundle_dir / "corpus.jsonl")
        self.corpus, _ = load_corpus(bundle_dir / "corpus.jsonl")
        if _sha256_file(bundle_dir / "corpus.jsonl") != corpus_digest:
            raise PipelineError("load", "corpus changed during load")

        self.config = EngineConfig(
            **{
                k: (tuple(v) if k == "k_grid" else v)
                for k, v in self.manifest["config"].items()
            }
        )
        table = load_vectors(bundle_dir / "vectors.txt", self.config.dim)
        self.embedder = SpanEmbedder(table, normalize_words=self.config.normalize_words)

        self.span_vectors: dict[str, SpanVector] = {}
        for rec in _read_records(bundle_dir / "span_vectors.jsonl", self.build_id):
            vec = np.array(rec["vector"], dtype=np.float64)
            self.span_vectors[rec["span_id"]] = SpanVector(vec, oov=rec["oov"])

        _read_records(bundle_dir / "index.jsonl", self.build_id)  # header check
        self.index: SearchIndex = build_search_index(self.corpus, self.embedder, self.span_vectors)

        self.concepts: list[Concept] = []
        for rec in _read_records(bundle_dir / "concepts.jsonl", self.build_id):
            self.concepts.append(
                Concept(
                    id=rec["id"],
                    kind=rec["kind"],
                    member_span_ids=tuple(rec["member_span_ids"]),
                    centroid=np.array(rec["centroid"], dtype=np.float64),
                    title_spans=tuple(rec["title_spans"]),
                )
            )
        self.rules: list[Rule] = [
            Rule(**rec) for rec in _read_records(bundle_dir / "rules.jsonl", self.build_id)
        ]
        self.graph: ConceptGraph = graph_from_records(
            _read_records(bundle_dir / "graph.jsonl", self.build_id)
        )

    # ---- shared query surface (CLI and HTTP API both call these) ----

    def search(self, query: FacetQuery) -> SearchResponse:
        return search(query, self.index)

    def inspire(
        self,
        seed_text: str,
        boxes: int | None = None,
        rng_seed: int | None = None,
    ) -> Session:
        conditions_count = 4
        per = self.config.boxes_per_condition
        if boxes is not None:
            if boxes % conditions_count:
                raise ValueError(f"boxes must be a multiple of {conditions_count}")
            per = boxes // conditions_count
        session_config = SessionConfig(
            boxes_per_condition=per,
            spans_per_box=self.config.spans_per_box,
            top_r=self.config.top_r,
            rng_seed=self.config.session_seed if rng_seed is None else rng_seed,
        )
        return generate_session(
            seed_text,
            self.concepts,
            self.graph,
            self.corpus,
            self.span_vectors,
            self.embedder,
            session_config,
        )

    def concept(self, concept_id: str) -> Concept:
        for c in self.concepts:
            if c.id == concept_id:
                return c
        raise KeyError(f"unknown concept {concept_id!r}")

    def append_marks(self, record: dict) -> None:
        with open(self.dir / MARKS_NAME, "a", encoding="utf-8") as fh:
            fh.write(_dump(record) + "\n")
