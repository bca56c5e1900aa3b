"""Command-line pipeline: ingest, build, query, evaluate, serve.

Verbs
-----
ingest            validate a corpus file and print its stats
build             run the full pipeline and write a bundle directory
search            faceted search against a bundle
inspire           generate an inspiration session for a seed problem
graph neighbors   ranked neighbor concepts of a graph node
eval search       MAP/NDCG per method from a judgments file
eval extraction   token-level P/R/F1 of predictions against gold
eval inspiration  rater-agreement statistics from session + marks files
serve             host the HTTP JSON API

``--format records`` switches any reporting verb to line-delimited JSON
for machine consumption.  Errors exit nonzero with a stage-tagged
message; usage errors exit 2.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import ConfigError, resolve_config
from .corpus import load_corpus
from .extraction import ScoredPrediction, precision_at_k, score_extraction
from .inspiration import Session, load_session, save_session
from .metrics import (
    box_agreement,
    load_judgments,
    load_marks,
    map_over_queries,
    mean_ndcg,
    span_agreement,
)
from .pipeline import Bundle, PipelineError, build_bundle
from .render import (
    edge_to_dict,
    format_table,
    search_response_to_dict,
    search_result_to_dict,
)
from .rules import neighbors
from .search import FacetQuery


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ideafacets",
        description="Faceted functional search and concept-graph mining.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("ingest", help="validate a corpus file and print stats")
    p.add_argument("corpus", help="corpus JSONL file")
    _add_format(p)

    p = sub.add_parser("build", help="build an index bundle")
    p.add_argument("--corpus", required=True)
    p.add_argument("--vectors", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--config", help="JSON config file")
    p.add_argument("--precomputed", help="precomputed span-vector JSONL")
    p.add_argument("--force", action="store_true", help="replace an existing bundle")
    p.add_argument("--dim", type=int)
    p.add_argument("--purpose-k", dest="purpose_k")
    p.add_argument("--mechanism-k", dest="mechanism_k")
    p.add_argument("--k-grid", dest="k_grid")
    p.add_argument("--cluster-seed", dest="cluster_seed", type=int)
    p.add_argument("--session-seed", dest="session_seed", type=int)
    p.add_argument("--min-support", dest="min_support", type=int)
    p.add_argument("--min-confidence", dest="min_confidence", type=float)
    p.add_argument("--type-threshold", dest="type_threshold", type=float)

    p = sub.add_parser("search", help="faceted search against a bundle")
    p.add_argument("--bundle", required=True)
    p.add_argument("--purpose", action="append", default=[], metavar="TEXT")
    p.add_argument("--not-purpose", dest="not_purpose", action="append", default=[], metavar="TEXT")
    p.add_argument("--mechanism", action="append", default=[], metavar="TEXT")
    p.add_argument("--not-mechanism", dest="not_mechanism", action="append", default=[], metavar="TEXT")
    p.add_argument("--method", choices=["avg", "maxmin"], default="avg")
    p.add_argument("--neg-percentile", dest="neg_percentile", type=float, default=90.0)
    p.add_argument("--limit", type=int, default=20)
    p.add_argument("--combine", choices=["mean", "sum", "purpose-only"], default="mean")
    _add_format(p)

    p = sub.add_parser("inspire", help="generate an inspiration session")
    p.add_argument("--bundle", required=True)
    p.add_argument("--seed", required=True, help="seed problem text")
    p.add_argument("--boxes", type=int, default=None)
    p.add_argument("--rng-seed", dest="rng_seed", type=int, default=None)
    p.add_argument("--out", help="write the session JSON here")
    _add_format(p)

    p = sub.add_parser("graph", help="concept graph queries")
    graph_sub = p.add_subparsers(dest="graph_verb", required=True)
    g = graph_sub.add_parser("neighbors", help="ranked neighbors of a concept")
    g.add_argument("--bundle", required=True)
    g.add_argument("--concept", required=True)
    g.add_argument("--direction", choices=["in", "out", "both"], default="out")
    g.add_argument("--top", type=int, default=3)
    _add_format(g)

    p = sub.add_parser("eval", help="evaluation harnesses")
    eval_sub = p.add_subparsers(dest="eval_verb", required=True)

    e = eval_sub.add_parser("search", help="MAP/NDCG per method from judgments")
    e.add_argument("--judgments", required=True)
    e.add_argument("--cutoff", type=int, default=20)
    e.add_argument("--zero-relevant", dest="zero_relevant", choices=["skip", "zero"], default="skip")
    _add_format(e)

    e = eval_sub.add_parser("extraction", help="score predictions against gold")
    e.add_argument("--pred", required=True)
    e.add_argument("--gold", required=True)
    e.add_argument("--at", type=int, default=None, help="also report precision@K")
    _add_format(e)

    e = eval_sub.add_parser("inspiration", help="agreement statistics from marks")
    e.add_argument("--session", action="append", required=True, help="session JSON file (repeatable)")
    e.add_argument("--marks", required=True)
    e.add_argument("--min-raters", dest="min_raters", type=int, default=2)
    e.add_argument("--min-spans", dest="min_spans", type=int, default=2)
    _add_format(e)

    p = sub.add_parser("serve", help="host the HTTP JSON API")
    p.add_argument("--bundle", required=True)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--ui", help="also serve this directory as the web UI (e.g. frontend/)")

    return parser


def _add_format(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--format", choices=["table", "records"], default="table",
        help="human table or line-delimited JSON records",
    )


def _emit(args, rows: list[dict], columns: list[str]) -> None:
    if args.format == "records":
        for row in rows:
            print(json.dumps(row, ensure_ascii=False, sort_keys=True))
    else:
        print(format_table(rows, columns))


def cmd_ingest(args) -> int:
    corpus, stats = load_corpus(args.corpus)
    payload = stats.as_dict()
    if args.format == "records":
        print(json.dumps(payload, ensure_ascii=False, sort_keys=True))
    else:
        shares = payload.pop("token_shares")
        rows = [payload | {f"{k}_share": v for k, v in shares.items()}]
        _emit(args, rows, list(rows[0].keys()))
    return 0


def cmd_build(args) -> int:
    cli_values = {
        name: getattr(args, name)
        for name in (
            "dim", "purpose_k", "mechanism_k", "k_grid", "cluster_seed", "session_seed",
            "min_support", "min_confidence", "type_threshold",
        )
    }
    config = resolve_config(cli_values=cli_values, config_path=args.config)
    manifest = build_bundle(
        args.corpus, args.vectors, args.out,
        config=config, precomputed_path=args.precomputed, force=args.force,
    )
    print(f"built bundle {manifest['build_id']} at {args.out}")
    return 0


def cmd_search(args) -> int:
    bundle = Bundle(args.bundle)
    query = FacetQuery(
        purpose_pos=tuple(args.purpose),
        purpose_neg=tuple(args.not_purpose),
        mech_pos=tuple(args.mechanism),
        mech_neg=tuple(args.not_mechanism),
        method=args.method,
        neg_percentile=args.neg_percentile,
        limit=args.limit,
        combine=args.combine,
    )
    response = bundle.search(query)
    if args.format == "records":
        print(json.dumps(search_response_to_dict(response, bundle.build_id),
                         ensure_ascii=False, sort_keys=True))
        return 0
    rows = []
    for rank, result in enumerate(response.results, start=1):
        row = {"rank": rank} | search_result_to_dict(result)
        row["title"] = bundle.corpus.get(result.doc_id).title
        row.pop("matched_spans")
        rows.append(row)
    _emit(args, rows, ["rank", "doc_id", "title", "score", "purpose_distance", "mechanism_distance"])
    if response.over_constrained:
        print("note: query over-constrained; negations excluded every candidate", file=sys.stderr)
    return 0


def cmd_inspire(args) -> int:
    bundle = Bundle(args.bundle)
    session = bundle.inspire(args.seed, boxes=args.boxes, rng_seed=args.rng_seed)
    if args.out:
        save_session(session, args.out)
    if args.format == "records":
        print(json.dumps(session.as_dict(), ensure_ascii=False, sort_keys=True))
        return 0
    rows = [
        {
            "box": box.display_order,
            "condition": box.condition,
            "concept": box.concept_id or "-",
            "spans": " | ".join(box.spans),
        }
        for box in session.boxes
    ]
    _emit(args, rows, ["box", "condition", "concept", "spans"])
    return 0


def cmd_graph_neighbors(args) -> int:
    bundle = Bundle(args.bundle)
    edges = neighbors(bundle.graph, args.concept, direction=args.direction, top_r=args.top)
    rows = []
    for edge in edges:
        far_id = edge.target if edge.source == args.concept else edge.source
        far = bundle.graph.concepts[far_id]
        rows.append(
            edge_to_dict(edge)
            | {"neighbor": far_id, "neighbor_titles": "; ".join(far.title_spans)}
        )
    _emit(args, rows, ["source", "target", "relation", "confidence", "support_count", "neighbor_titles"])
    return 0


def cmd_eval_search(args) -> int:
    by_method = load_judgments(args.judgments)
    rows = []
    for method in sorted(by_method):
        rankings = by_method[method]
        rows.append(
            {
                "method": method,
                "queries": len(rankings),
                "map": map_over_queries(rankings, zero_relevant=args.zero_relevant),
                "ndcg": mean_ndcg(rankings, zero_relevant=args.zero_relevant),
            }
        )
    _emit(args, rows, ["method", "queries", "map", "ndcg"])
    return 0


def cmd_eval_extraction(args) -> int:
    pred, _ = load_corpus(args.pred)
    gold, _ = load_corpus(args.gold)
    report = score_extraction(pred, gold)
    rows = [
        {"label": label, "precision": prf.precision, "recall": prf.recall, "f1": prf.f1}
        for label, prf in report.per_label.items()
    ]
    rows.append({"label": "micro", "precision": report.micro.precision,
                 "recall": report.micro.recall, "f1": report.micro.f1})
    rows.append({"label": "span-exact", "precision": report.span_exact.precision,
                 "recall": report.span_exact.recall, "f1": report.span_exact.f1})
    if args.at:
        predictions = [
            ScoredPrediction(span=span, confidence=span.confidence or 0.5, doc_id=doc.id)
            for doc in pred
            for span in doc.spans
        ]
        patk = precision_at_k(predictions, gold, args.at)
        rows.append({"label": f"p@{args.at}", "precision": patk.value,
                     "recall": None, "f1": None})
        if patk.k_effective < patk.k_requested:
            print(f"note: only {patk.k_effective} predictions available", file=sys.stderr)
    _emit(args, rows, ["label", "precision", "recall", "f1"])
    return 0


def cmd_eval_inspiration(args) -> int:
    sessions: dict[str, Session] = {}
    for path in args.session:
        session = load_session(path)
        sessions[session.session_id] = session
    marks = load_marks(args.marks)
    spans = span_agreement(sessions, marks, min_raters=args.min_raters)
    boxes = box_agreement(sessions, marks, min_raters=args.min_raters, min_spans=args.min_spans)
    rows = [
        {"condition": cond, "span_agreement": spans.get(cond, 0.0), "box_agreement": boxes.get(cond, 0.0)}
        for cond in sorted(set(spans) | set(boxes))
    ]
    _emit(args, rows, ["condition", "span_agreement", "box_agreement"])
    return 0


def cmd_serve(args) -> int:
    from .server import serve

    serve(args.bundle, host=args.host, port=args.port, ui_dir=args.ui)
    return 0


_HANDLERS = {
    "ingest": cmd_ingest,
    "build": cmd_build,
    "search": cmd_search,
    "inspire": cmd_inspire,
    "serve": cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.verb == "graph":
            return cmd_graph_neighbors(args)
        if args.verb == "eval":
            handler = {
                "search": cmd_eval_search,
                "extraction": cmd_eval_extraction,
                "inspiration": cmd_eval_inspiration,
            }[args.eval_verb]
            return handler(args)
        return _HANDLERS[args.verb](args)
    except PipelineError as exc:
        print(f"error [{exc.stage}]: {exc}", file=sys.stderr)
        return 1
    except (ConfigError, ValueError, KeyError, OSError) as exc:
        print(f"error [{args.verb}]: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
