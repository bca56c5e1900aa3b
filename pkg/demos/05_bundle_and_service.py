# The offline/online split: build a reproducible index bundle, load it
# as an immutable snapshot, and query it through the same core the HTTP
# API and CLI share.
#
# Run:  python3 demos/05_bundle_and_service.py

import json
import os
import tempfile
from importlib import resources
from pathlib import Path

from ideafacets import Bundle, FacetQuery, build_bundle
from ideafacets.config import resolve_config

data = resources.files("ideafacets").joinpath("data")
build_config = json.loads((data / "fixture_scenarios.json").read_text())["build_config"]
config = resolve_config(cli_values=build_config, env={})

# SOURCE_DATE_EPOCH pins the manifest timestamp, making rebuilds
# byte-identical (the reproducible-builds convention).
os.environ.setdefault("SOURCE_DATE_EPOCH", "1700000000")

with tempfile.TemporaryDirectory() as tmp:
    out = Path(tmp) / "bundle"
    manifest = build_bundle(
        data / "fixture_corpus.jsonl", data / "fixture_vectors.txt", out, config=config)
    print(f"built bundle {manifest['build_id']} ({len(manifest['artifacts'])} artifacts)")
    for name, digest in sorted(manifest["artifacts"].items()):
        print(f"  {name:<22} sha256:{digest[:12]}...")

    # A Bundle is a read-only snapshot; every query surface goes through it.
    bundle = Bundle(out)
    response = bundle.search(FacetQuery(mech_pos=("solar energy",),
                                        purpose_neg=("generating power",), limit=3))
    print("\nsolar energy, NOT for generating power:")
    for result in response.results:
        print(f"  {result.doc_id:<16} score={result.score:.4f}")

    session = bundle.inspire("morning medicine reminder", boxes=8)
    print(f"\ninspire -> session {session.session_id} with {len(session.boxes)} boxes")

# The same bundle serves over HTTP:
#   ideafacets serve --bundle <dir> --port 8000
# then e.g.
#   curl -s localhost:8000/api/health
#   curl -s -X POST localhost:8000/api/search \
#        -H 'content-type: application/json' \
#        -d '{"mechanism": ["light"], "not_purpose": ["light"]}'
# The explorer UI under frontend/ consumes exactly these endpoints.
print("\nCLI equivalents:")
print("  ideafacets build --corpus corpus.jsonl --vectors vectors.txt --out bundle/")
print("  ideafacets search --bundle bundle/ --mechanism light --not-purpose light")
print("  ideafacets inspire --bundle bundle/ --seed 'morning medicine reminder' --boxes 8")
print("  ideafacets serve --bundle bundle/ --port 8000")
