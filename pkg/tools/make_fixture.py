#!/usr/bin/env python3
"""Regenerate the bundled demo fixture: a 30-product corpus, a matching
synthetic word-vector table, and the search-scenario expectations.

The vector table assigns each vocabulary word to one of 24 semantic
topics; a word's vector is its topic axis plus a small word-specific
perturbation, so same-topic words are near-identical and cross-topic
words are near-orthogonal.  Documents are written so every labeled span
carries exactly the topic signal it needs, which makes the scenario
outcomes (exclusions, top ranks, concept-graph edges) hold with wide
numeric margins.

Run from the repo root:  python3 tools/make_fixture.py
The script rebuilds the data files under src/ideafacets/data/ and then
re-runs the whole pipeline against them, asserting every planted
outcome before it overwrites anything.
"""

from __future__ import annotations

import hashlib
import json
import sys
from pathlib import Path

import numpy as np

REPO = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO / "src"))

from ideafacets.clustering import ClusteringConfig, build_concepts  # noqa: E402
from ideafacets.corpus import MECHANISM, PURPOSE, Corpus, parse_document, tokenize  # noqa: E402
from ideafacets.embeddings import SpanEmbedder, WordVectorTable, load_stopwords  # noqa: E402
from ideafacets.inspiration import SessionConfig, generate_session, map_seed  # noqa: E402
from ideafacets.rules import build_graph, build_transactions, mine_rules  # noqa: E402
from ideafacets.search import FacetQuery, build_search_index, negative_filter, search  # noqa: E402

DATA = REPO / "src" / "ideafacets" / "data"
DIM = 32
NOISE = 0.08

# ---------------------------------------------------------------- vocabulary

TOPICS: dict[str, list[str]] = {
    "light": "light lights glow glowing bright brighten brightens illuminate illuminates laser led uv bulb bulbs beam shine shines lamp projector".split(),
    "cleaning": "clean cleans cleaning cleaner sanitize sanitizes sanitizing sterilize sterilizes wash washes washing scrub scrubs disinfect dirt stains".split(),
    "drinking": "drink drinking drinks hydrate hydrated hydration thirst sip quench".split(),
    "locating": "locate locating locates find finds finding track tracking tracks location lost".split(),
    "power": "power powers powered charge charges charging charger generate generates generating electricity energy recharge watts".split(),
    "alert": "alert alerts remind reminds reminder reminders notify notifies notification warn warns warning wake wakes".split(),
    "hotdrinks": "coffee tea espresso brew brews brewing cocoa latte".split(),
    "health": "health heart pulse vitals vital glucose monitor monitors monitoring checker wellness heartbeat".split(),
    "medicine": "pill pills dose doses medication dispense dispenses dispensing inject injects injector syringe".split(),
    "security": "lock locks secure secures security protect protects protecting theft guard guards safe safety".split(),
    "fire": "fire flame flames ignite ignites burn burns spark".split(),
    "solar": "solar sunlight photovoltaic sun cells panel".split(),
    "water": "water liquid steam rain moisture".split(),
    "rfid": "rfid nfc chip chips tag".split(),
    "motor": "motor motors spin spins spinning twirling crank rotating pump wheel".split(),
    "battery": "battery batteries lithium usb plug electric".split(),
    "radio": "bluetooth wireless gps radio signal antenna beacon".split(),
    "sensor": "sensor sensors detect detects detector motion".split(),
    "timer": "timer timers programmable countdown".split(),
    "material": "foam fabric plastic rubber strip strips mat sticker stickers label labels pocket pockets".split(),
    "food": "food fruit snack".split(),
    "education": "learn learning teach teaches math numbers counting".split(),
    "storage": "store stores storing organize organizes carry carrying fold folds holder".split(),
    "skill": "aim practice training improve improves accuracy".split(),
}


def word_vector(word: str, axis: int) -> np.ndarray:
    seed = int.from_bytes(hashlib.sha256(word.encode("utf-8")).digest()[:8], "big")
    rng = np.random.default_rng(seed)
    noise = rng.standard_normal(DIM)
    noise /= np.linalg.norm(noise)
    vec = np.zeros(DIM)
    vec[axis] = 1.0
    vec = vec + NOISE * noise
    return vec / np.linalg.norm(vec)


def build_vectors() -> dict[str, np.ndarray]:
    vectors: dict[str, np.ndarray] = {}
    for axis, (_, words) in enumerate(TOPICS.items()):
        for word in words:
            assert word not in vectors, f"word {word!r} assigned to two topics"
            vectors[word] = word_vector(word, axis)
    return vectors


# ---------------------------------------------------------------- documents
# Each document is a list of (kind, text) segments joined by single spaces;
# kind "t" is plain filler, "p"/"m" become purpose/mechanism spans.

DOCS: list[tuple[str, str, list[tuple[str, str]]]] = [
    ("desk-lamp", "Clip LED Desk Lamp", [
        ("t", "A slim clip on lamp for your desk , headboard or shelf ."),
        ("p", "light up your desk"),
        ("t", "without hogging an outlet . The"),
        ("m", "dimmable low heat led bulb"),
        ("t", "on a"),
        ("m", "bendy plastic clip arm"),
        ("t", "swivels anywhere u want . Great 4 dorm rooms , and it can"),
        ("p", "brighten the room"),
        ("t", "without harsh shadows ."),
    ]),
    ("uv-sanitizer", "UV Barbell Sanitizer Box", [
        ("t", "Gym gear is gross . Drop a bar end into this box to"),
        ("p", "sanitize your barbells"),
        ("t", "between sets . The sealed"),
        ("m", "sealed uv light chamber"),
        ("t", "zaps germs in seconds , no sprays or wipes needed . It helps"),
        ("p", "keep gym gear clean"),
        ("t", "for everyone at the rack ."),
    ]),
    ("solar-charger", "Pocket Solar Charger", [
        ("t", "Clip it to a backpack and"),
        ("p", "charge your phone"),
        ("t", "while you hike . The"),
        ("m", "compact fold flat solar panel"),
        ("t", "folds flat , so you can"),
        ("p", "generate power on the go"),
        ("t", "even far from any outlet . Perfect For Carrying ."),
    ]),
    ("solar-bulb", "Solar Chip Garden Bulb", [
        ("t", "Screw in bulbs that sip from the sun . The"),
        ("m", "built-in amorphous solar cells"),
        ("t", "soak up rays all day so the globe can"),
        ("p", "light up your garden"),
        ("t", "all evening with zero wiring . No electrician , no bills ."),
    ]),
    ("steam-mop", "Pressure Steam Mop", [
        ("t", "A mop that does the hard part 4 u . Its"),
        ("m", "pressurized hot water jets"),
        ("t", "loosen grime so you can"),
        ("p", "wash your floors"),
        ("t", "in one pass and"),
        ("p", "scrub away dirt"),
        ("t", "in corners with the"),
        ("m", "foam mop pad"),
        ("t", ", no kneeling or refilling buckets ."),
    ]),
    ("smart-bottle", "Smart Sports Bottle", [
        ("t", "A bottle that nudges you toward better habits . The big"),
        ("m", "double wall water tank"),
        ("t", "and marked lines help you"),
        ("p", "sip more during workouts"),
        ("t", "and"),
        ("p", "keep you hydrated"),
        ("t", "on long shifts . Dishwasher ok , fits any cup holder ."),
    ]),
    ("hydro-lighter", "Sun2Flame Camp Lighter", [
        ("t", "A camp lighter with no butane at all . It burns"),
        ("m", "hydrogen generated from water"),
        ("t", "using a"),
        ("m", "polished sunlight concentrator lens"),
        ("t", ", so you can"),
        ("p", "ignite a flame"),
        ("t", "and"),
        ("p", "start a fire anywhere"),
        ("t", "with just a puddle and a sunny sky ."),
    ]),
    ("pet-tracker", "RFID Pet Tracker Collar", [
        ("t", "Never lose your buddy at the park again . The collar 's"),
        ("m", "passive rfid tag"),
        ("t", "lets gate readers"),
        ("p", "locate your dog"),
        ("t", "instantly and"),
        ("p", "track your pet"),
        ("t", "around the yard . The"),
        ("m", "rugged rubber collar band"),
        ("t", "is waterproof and chew proof , obviously ."),
    ]),
    ("luggage-lock", "RFID Luggage Lock", [
        ("t", "A digital lock for your suitcase with no tiny keys to lose . Tap the"),
        ("m", "embedded rfid access chip"),
        ("t", "to pop it open ,"),
        ("p", "secure your luggage"),
        ("t", "at hostels , and"),
        ("p", "protect your belongings from theft"),
        ("t", "on every layover ."),
    ]),
    ("billiard-laser", "Billiard Laser Instructor", [
        ("t", "Clamp it over any pool table . The"),
        ("m", "overhead laser projector"),
        ("t", "traces the shot line on the felt to help you"),
        ("p", "improve your aim"),
        ("t", "and"),
        ("p", "practice like a pro"),
        ("t", "without a coach hovering over the rail ."),
    ]),
    ("night-light", "Hallway Motion Night Light", [
        ("t", "Plugs into any socket at knee height . A"),
        ("m", "passive motion sensor"),
        ("t", "wakes the"),
        ("m", "soft led bulb"),
        ("t", "to"),
        ("p", "illuminate dark hallways"),
        ("t", "just long enough to get to the kitchen and back . No switches ."),
    ]),
    ("toe-guard", "Glow Furniture Toe Guard", [
        ("t", "Foam corners for the bed frame that you can actually see at night . The"),
        ("m", "soft foam glow strip"),
        ("t", "marks every edge to"),
        ("p", "protect your pinky toes"),
        ("t", "on midnight fridge runs . Peel , stick , done ."),
    ]),
    ("allergy-sticker", "Allergy Alert Food Stickers", [
        ("t", "For lunch boxes and party platters . The"),
        ("m", "glowing adhesive sticker labels"),
        ("t", "flag which snacks hide nuts or dairy and"),
        ("p", "keep allergic kids safe"),
        ("t", "at school events when parents are not around ."),
    ]),
    ("spin-brush", "Twirl Spin Toothbrush", [
        ("t", "A cheap brush with a trick from fancy ones . The"),
        ("m", "tiny twirling motor"),
        ("t", "drives a"),
        ("m", "spinning brush head"),
        ("t", "to"),
        ("p", "scrub plaque away"),
        ("t", "and"),
        ("p", "improve your smile"),
        ("t", "in two minutes flat ."),
    ]),
    ("crank-charger", "Storm Crank Charger", [
        ("t", "For blackouts and trailheads . Wind the"),
        ("m", "geared hand crank motor"),
        ("t", "for a few minutes to"),
        ("p", "generate power in emergencies"),
        ("t", "and top up a phone when the grid is down . Lives in the glovebox ."),
    ]),
    ("battery-pack", "Brick Battery Pack", [
        ("t", "A chunky brick that outlasts a weekend . The"),
        ("m", "high capacity lithium battery pack"),
        ("t", "and dual"),
        ("m", "usb plug"),
        ("t", "ports"),
        ("p", "charge your devices fast"),
        ("t", ", two at a time , festival tested ."),
    ]),
    ("fruit-pitcher", "Fruit Infuser Pitcher", [
        ("t", "Plain water is boring . Load the"),
        ("m", "snap in fruit basket insert"),
        ("t", "with berries or mint to"),
        ("p", "keep you drinking more"),
        ("t", "and"),
        ("p", "quench your thirst"),
        ("t", "without sugary soda . Fits the fridge door shelf ."),
    ]),
    ("pet-fountain", "Whisper Pet Fountain", [
        ("t", "Cats prefer moving streams . The quiet"),
        ("m", "quiet circulating pump motor"),
        ("t", "keeps a fresh trickle going to"),
        ("p", "keep your cat hydrated"),
        ("t", "while you are at work . Filter pops out for rinsing ."),
    ]),
    ("key-finder", "Clip Key Finder", [
        ("t", "Stop digging through couch cushions . A coin sized"),
        ("m", "coin cell bluetooth beacon"),
        ("t", "on the ring helps you"),
        ("p", "find your keys"),
        ("t", "with one tap in the app , even under yesterday 's laundry ."),
    ]),
    ("kid-watch", "Sprout Kid Watch", [
        ("t", "A bright little watch for the walk to school . The"),
        ("m", "tiny gps radio module"),
        ("t", "lets you"),
        ("p", "track your kids location"),
        ("t", "from a simple map , with a fence alert if they wander off route ."),
    ]),
    ("coffee-alarm", "Coffee Machine Alarm", [
        ("t", "Wake up to a ready mug . The"),
        ("m", "built-in drip timer"),
        ("t", "starts the pot early ; it is a"),
        ("p", "coffee alarm"),
        ("t", "that will"),
        ("p", "brew fresh coffee"),
        ("t", "and then"),
        ("p", "alerts you when ready"),
        ("t", ". Mornings , handled ."),
    ]),
    ("alarm-brewer", "Alarm Clock Brewer", [
        ("t", "Bedside brewing , really . Set the"),
        ("m", "programmable countdown timer"),
        ("t", "to"),
        ("p", "schedule coffee"),
        ("t", "the night before ; it can"),
        ("p", "remind you to wake up"),
        ("t", "by"),
        ("p", "making coffee at a set time"),
        ("t", "right next to your pillow ."),
    ]),
    ("smart-kettle", "Ping Smart Kettle", [
        ("t", "No more forgotten kettles . The"),
        ("m", "fast electric heating coil"),
        ("t", "can"),
        ("p", "brew tea quickly"),
        ("t", "and the app"),
        ("p", "sends you a notification"),
        ("t", "the second it clicks off , so nothing boils dry on the stove ."),
    ]),
    ("health-checker", "Pocket Health Checker", [
        ("t", "A"),
        ("m", "wearable chest sensor"),
        ("t", "the size of a coin . It is a"),
        ("p", "real time health checker"),
        ("t", "that can"),
        ("p", "monitor your heart rate"),
        ("t", "all day and"),
        ("p", "alerts you of abnormal readings"),
        ("t", "before they become scary ."),
    ]),
    ("vitals-band", "Clinic Vitals Band", [
        ("t", "A soft wristband for recovering patients . Its"),
        ("m", "soft skin contact sensor"),
        ("t", "can"),
        ("p", "check your pulse"),
        ("t", ","),
        ("p", "send vital data"),
        ("t", "to the clinic , and"),
        ("p", "warn you right away"),
        ("t", "if numbers drift overnight ."),
    ]),
    ("glucose-watch", "Glucose Watch Band", [
        ("t", "Skip the finger pricks . A"),
        ("m", "tiny adhesive sensor patch"),
        ("t", "under the band can"),
        ("p", "continuously monitor glucose"),
        ("t", "and"),
        ("p", "notify you to check levels"),
        ("t", "after meals , with a quiet buzz instead of a siren ."),
    ]),
    ("pill-dispenser", "Carousel Pill Dispenser", [
        ("t", "A countertop carousel for complicated weeks . The"),
        ("m", "slow rotating carousel tray"),
        ("t", "can"),
        ("p", "dispense your pills on time"),
        ("t", "and helps you"),
        ("p", "never miss a dose"),
        ("t", ", with big friendly compartments labeled by day ."),
    ]),
    ("med-injector", "Steady Med Injector", [
        ("t", "For shaky hands and strict schedules . The"),
        ("m", "precise micro dosing pump"),
        ("t", "can"),
        ("p", "inject medication precisely"),
        ("t", "and"),
        ("p", "deliver steady doses"),
        ("t", "without the guesswork of a manual plunger ."),
    ]),
    ("math-mat", "123 4FUN Math Mat", [
        ("t", "An Educational Math Mat 4 Kids , a mix of Twister and Whac-A-Mole . The"),
        ("m", "squishy foam play mat"),
        ("t", "and"),
        ("m", "rubber whack mallet"),
        ("t", "let you"),
        ("p", "teach kids counting"),
        ("t", "and make"),
        ("p", "learning place values"),
        ("t", "a stomping game . Folds Up Perfect For Carrying ."),
    ]),
    ("shoe-organizer", "Over Door Shoe Organizer", [
        ("t", "Reclaim the closet floor . The"),
        ("m", "hanging fabric pockets"),
        ("t", "go over any door to"),
        ("p", "store your shoes neatly"),
        ("t", "and"),
        ("p", "organize your closet"),
        ("t", "without a single screw . The"),
        ("m", "plastic hook strips"),
        ("t", "hold twenty pockets , flats to trainers ."),
    ]),
]

# ------------------------------------------------------------- expectations

SCENARIOS = [
    {
        "name": "light-not-light",
        "description": "Mechanism: light. Purpose: NOT light.",
        "query": {"mech_pos": ["light"], "purpose_neg": ["light"]},
        "excluded_docs": ["desk-lamp", "solar-bulb", "night-light"],
        "typical_doc": "desk-lamp",
        "target_doc": "uv-sanitizer",
        "target_rank_max": 3,
    },
    {
        "name": "solar-not-power",
        "description": "Mechanism: solar energy. Purpose: NOT generating power.",
        "query": {"mech_pos": ["solar energy"], "purpose_neg": ["generating power"]},
        "excluded_docs": ["solar-charger", "crank-charger", "battery-pack"],
        "typical_doc": "solar-charger",
        "target_doc": "solar-bulb",
        "target_rank_max": 3,
    },
    {
        "name": "water-not-cleaning-drinking",
        "description": "Mechanism: water. Purpose: NOT cleaning, NOT drinking.",
        "query": {"mech_pos": ["water"], "purpose_neg": ["cleaning", "drinking"]},
        "excluded_docs": [
            "steam-mop", "uv-sanitizer", "spin-brush",
            "smart-bottle", "fruit-pitcher", "pet-fountain",
        ],
        "typical_doc": "steam-mop",
        "target_doc": "hydro-lighter",
        "target_rank_max": 3,
    },
    {
        "name": "rfid-not-locating-tracking",
        "description": "Mechanism: RFID. Purpose: NOT locating, NOT tracking.",
        "query": {"mech_pos": ["RFID"], "purpose_neg": ["locating", "tracking"]},
        "excluded_docs": ["pet-tracker", "key-finder", "kid-watch"],
        "typical_doc": "pet-tracker",
        "target_doc": "luggage-lock",
        "target_rank_max": 3,
    },
    {
        "name": "light-for-cleaning",
        "description": "Mechanism: light. Purpose: cleaning.",
        "query": {"mech_pos": ["light"], "purpose_pos": ["cleaning"]},
        "excluded_docs": [],
        "typical_doc": None,
        "target_doc": "uv-sanitizer",
        "target_rank_max": 3,
    },
]

PLANTED = {
    "seed": "morning medicine reminder",
    "seed_concept_spans": [
        "alerts you when ready", "remind you to wake up", "sends you a notification",
        "alerts you of abnormal readings", "warn you right away", "notify you to check levels",
    ],
    "hotdrink_spans": [
        "coffee alarm", "brew fresh coffee", "schedule coffee",
        "making coffee at a set time", "brew tea quickly",
    ],
    "health_spans": [
        "real time health checker", "monitor your heart rate", "check your pulse",
        "send vital data", "continuously monitor glucose",
    ],
    "medicine_spans": [
        "dispense your pills on time", "never miss a dose",
        "inject medication precisely", "deliver steady doses",
    ],
    "box_strings": ["schedule coffee", "coffee alarm", "real time health checker", "send vital data"],
}

PURPOSE_TOPICS = 14
MECHANISM_TOPICS = 11

BUILD_CONFIG = {
    "dim": DIM,
    "purpose_k": PURPOSE_TOPICS,
    "mechanism_k": MECHANISM_TOPICS,
    "k_grid": list(range(2, 19)),
    "cluster_seed": 7,
    "session_seed": 11,
    "min_support": 3,
    "min_confidence": 0.5,
    "type_threshold": 0.6,
    "silhouette_sample": 2000,
}


def render_doc(doc_id: str, title: str, segments: list[tuple[str, str]]) -> dict:
    text_parts: list[str] = []
    spans: list[dict] = []
    offset = 0
    for kind, chunk in segments:
        if text_parts:
            offset += 1  # joining space
        start = offset
        text_parts.append(chunk)
        offset += len(chunk)
        if kind in ("p", "m"):
            spans.append(
                {
                    "start": start,
                    "end": offset,
                    "label": PURPOSE if kind == "p" else MECHANISM,
                }
            )
    return {"id": doc_id, "title": title, "text": " ".join(text_parts), "spans": spans, "source": "gold"}


def main() -> None:
    vectors = build_vectors()
    records = [render_doc(*doc) for doc in DOCS]
    corpus = Corpus([parse_document(r) for r in records])

    stats = corpus.stats()
    shares = stats.token_shares
    print(f"docs={stats.documents} tokens={stats.tokens} "
          f"purpose={shares[PURPOSE]:.3f} mechanism={shares[MECHANISM]:.3f} other={shares['other']:.3f}")
    assert stats.documents == 30
    assert abs(shares[PURPOSE] - 0.159) < 0.05, shares
    assert abs(shares[MECHANISM] - 0.145) < 0.05, shares

    stopwords = load_stopwords()
    for _, span in corpus.spans_with_ids():
        in_vocab = [
            t.surface.lower()
            for t in tokenize(span.surface)
            if t.surface.lower() not in stopwords and t.surface.lower() in vectors
        ]
        assert in_vocab, f"span {span.surface!r} has no in-vocabulary token"

    table = WordVectorTable(DIM, {w: v for w, v in vectors.items()})
    embedder = SpanEmbedder(table, stopwords=stopwords)
    span_vectors = embedder.embed_corpus(corpus)
    index = build_search_index(corpus, embedder, span_vectors)

    # Scenario outcomes must hold under both distance methods.
    for scenario in SCENARIOS:
        for method in ("avg", "maxmin"):
            q = scenario["query"]
            query = FacetQuery(
                purpose_pos=tuple(q.get("purpose_pos", ())),
                purpose_neg=tuple(q.get("purpose_neg", ())),
                mech_pos=tuple(q.get("mech_pos", ())),
                mech_neg=tuple(q.get("mech_neg", ())),
                method=method,
                limit=30,
            )
            response = search(query, index)
            got_excluded = set(response.excluded_doc_ids)
            expect_excluded = set(scenario["excluded_docs"])
            assert got_excluded == expect_excluded, (
                scenario["name"], method, got_excluded, expect_excluded)
            ranked = [r.doc_id for r in response.results]
            pos = ranked.index(scenario["target_doc"])
            assert pos < scenario["target_rank_max"], (scenario["name"], method, ranked[:5])
            print(f"  scenario {scenario['name']:<28} [{method}] target at rank {pos + 1}")
            # margin audit: boundary of the percentile filter is not close
            for chunks, side in ((query.purpose_neg, PURPOSE), (query.mech_neg, MECHANISM)):
                for chunk in chunks:
                    from ideafacets.search import _side_distance, embed_chunks  # noqa: PLC0415
                    cv = embed_chunks(embedder, (chunk,))
                    dists = sorted(
                        _side_distance(method, cv, e, side) for e in index.entries
                    )
                    gap = dists[3] - dists[2]
                    assert gap > 0.1, (scenario["name"], chunk, dists[:6])

    # Clustering recovers the planted topics.
    purpose_cfg = ClusteringConfig(
        k=PURPOSE_TOPICS, seed=BUILD_CONFIG["cluster_seed"], title_count=3)
    mech_cfg = ClusteringConfig(
        k=MECHANISM_TOPICS, seed=BUILD_CONFIG["cluster_seed"], title_count=3)
    purpose_build = build_concepts(corpus, span_vectors, PURPOSE, purpose_cfg)
    mech_build = build_concepts(corpus, span_vectors, MECHANISM, mech_cfg)

    def concept_of(surface: str):
        for concept in purpose_build.concepts:
            for sid in concept.member_span_ids:
                _, span = corpus.resolve_span(sid)
                if span.surface == surface:
                    return concept
        raise AssertionError(f"no concept contains {surface!r}")

    def surfaces(concept) -> set[str]:
        return {corpus.resolve_span(sid)[1].surface for sid in concept.member_span_ids}

    alert = concept_of("remind you to wake up")
    assert surfaces(alert) == set(PLANTED["seed_concept_spans"]), surfaces(alert)
    hot = concept_of("coffee alarm")
    assert surfaces(hot) == set(PLANTED["hotdrink_spans"]), surfaces(hot)
    health = concept_of("real time health checker")
    assert surfaces(health) == set(PLANTED["health_spans"]), surfaces(health)
    med = concept_of("never miss a dose")
    assert surfaces(med) == set(PLANTED["medicine_spans"]), surfaces(med)
    print(f"  concepts: alert={alert.id} hot={hot.id} health={health.id} med={med.id}")

    # Graph topology: alert links out to hot drinks and health monitoring.
    concepts = list(purpose_build.concepts) + list(mech_build.concepts)
    assignments = {**purpose_build.assignments, **mech_build.assignments}
    transactions = build_transactions(corpus, assignments)
    rules = mine_rules(transactions, BUILD_CONFIG["min_support"], BUILD_CONFIG["min_confidence"])
    conf = {(r.antecedent, r.consequent): r.confidence for r in rules}
    assert conf[(alert.id, hot.id)] == 0.5, conf
    assert conf[(hot.id, alert.id)] == 1.0, conf
    assert conf[(alert.id, health.id)] == 0.5, conf
    assert conf[(health.id, alert.id)] == 1.0, conf
    graph = build_graph(rules, concepts, transactions, BUILD_CONFIG["type_threshold"])
    out_targets = {e.target for e in graph.out_edges(alert.id)}
    assert {hot.id, health.id} <= out_targets, out_targets

    seed = map_seed(PLANTED["seed"], concepts, embedder)
    assert seed.mapped_concept == alert.id, (seed.mapped_concept, alert.id)

    session = generate_session(
        PLANTED["seed"], concepts, graph, corpus, span_vectors, embedder,
        SessionConfig(rng_seed=BUILD_CONFIG["session_seed"]),
    )
    assert len(session.boxes) == 8
    all_spans = {s for box in session.boxes for s in box.spans}
    for needle in PLANTED["box_strings"]:
        assert needle in all_spans, (needle, sorted(all_spans))
    print(f"  session OK: 8 boxes, planted strings present; seed -> {seed.mapped_concept}")

    # ------------------------------------------------------------- write out
    DATA.mkdir(parents=True, exist_ok=True)
    with open(DATA / "fixture_corpus.jsonl", "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record, ensure_ascii=False, sort_keys=True) + "\n")
    with open(DATA / "fixture_vectors.txt", "w", encoding="utf-8") as fh:
        for word in sorted(vectors):
            values = " ".join(f"{x:.6f}" for x in vectors[word])
            fh.write(f"{word} {values}\n")
    payload = {
        "build_config": BUILD_CONFIG,
        "scenarios": SCENARIOS,
        "planted": PLANTED,
        "concept_hints": {
            "alert_surface": "remind you to wake up",
            "hotdrinks_surface": "coffee alarm",
            "health_surface": "real time health checker",
        },
    }
    with open(DATA / "fixture_scenarios.json", "w", encoding="utf-8") as fh:
        json.dump(payload, fh, ensure_ascii=False, sort_keys=True, indent=2)
        fh.write("\n")
    print(f"wrote fixture files to {DATA}")


if __name__ == "__main__":
    main()
