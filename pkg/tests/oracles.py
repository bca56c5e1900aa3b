"""Independent reference implementations used as test oracles.

Everything here is deliberately written in plain Python (lists, dicts,
math) with no numpy and no imports from the package under test, so a
bug in the engine cannot hide in a shared code path.  The oracles
re-derive each result from the definitions: exhaustive scans, O(n^2)
loops, explicit matrices, direct tallies.
"""

from __future__ import annotations

import math


# ---------------------------------------------------------------- vectors

def dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def norm(a):
    return math.sqrt(sum(x * x for x in a))


def normalize(a):
    n = norm(a)
    return [x / n for x in a]


def mean(vectors):
    count = len(vectors)
    return [sum(col) / count for col in zip(*vectors)]


# ------------------------------------------------------------- tokenizing
# Independent re-statement of the tokenizer contract: whitespace split,
# leading/trailing punctuation detached one character at a time.

_PUNCT = set(".,;:!?()[]{}'\"`~@#$%^&*-_=+<>/\\|")


def simple_tokens(text):
    tokens = []
    for raw in text.split():
        left = 0
        right = len(raw)
        lead = []
        while left < right and raw[left] in _PUNCT:
            lead.append(raw[left])
            left += 1
        trail = []
        while right > left and raw[right - 1] in _PUNCT:
            trail.append(raw[right - 1])
            right -= 1
        tokens.extend(lead)
        if left < right:
            tokens.append(raw[left:right])
        tokens.extend(reversed(trail))
    return tokens


def embed(text, table, stopwords):
    """Lowercase, drop stopwords and misses, average, L2-normalize.
    Returns None for an all-miss input."""
    picked = []
    for token in simple_tokens(text):
        word = token.lower()
        if word in stopwords or word not in table:
            continue
        picked.append(table[word])
    if not picked:
        return None
    return normalize(mean(picked))


# ----------------------------------------------------------------- search

def side_vectors(doc, label, table, stopwords):
    out = []
    for span in doc["spans"]:
        if span["label"] != label:
            continue
        surface = doc["text"][span["start"] : span["end"]]
        vec = embed(surface, table, stopwords)
        out.append(vec)  # None marks an OOV span
    return out


def avg_distance(query_vecs, span_vecs):
    usable = [v for v in span_vecs if v is not None]
    if not usable:
        return None
    q = normalize(mean(query_vecs))
    s = normalize(mean(usable))
    return 1.0 - dot(q, s)


def maxmin_distance(query_vecs, span_vecs):
    if not span_vecs or all(v is None for v in span_vecs):
        return None
    dim = len(query_vecs[0])
    rows = [v if v is not None else [0.0] * dim for v in span_vecs]
    best = []
    for q in query_vecs:
        best.append(max(dot(q, row) for row in rows))
    return 1.0 - min(best)


def side_distance(method, query_vecs, doc, label, table, stopwords):
    spans = side_vectors(doc, label, table, stopwords)
    d = avg_distance(query_vecs, spans) if method == "avg" else maxmin_distance(query_vecs, spans)
    return 2.0 if d is None else d


def brute_force_search(docs, table, stopwords, query):
    """Exhaustive re-derivation of the faceted search contract.

    ``query`` mirrors FacetQuery: purpose_pos/purpose_neg/mech_pos/
    mech_neg lists, method, neg_percentile, limit, combine.
    Returns (ranked (doc id, score) pairs, excluded doc ids,
    over_constrained).
    """
    method = query.get("method", "avg")
    percentile = query.get("neg_percentile", 90.0)
    limit = query.get("limit", 20)
    combine = query.get("combine", "mean")

    def chunk_vecs(chunks):
        out = []
        for chunk in chunks:
            vec = embed(chunk, table, stopwords)
            assert vec is not None, f"oracle query chunk {chunk!r} fully OOV"
            out.append(vec)
        return out

    purpose_pos = chunk_vecs(query.get("purpose_pos", []))
    mech_pos = chunk_vecs(query.get("mech_pos", []))

    allowed = {doc["id"] for doc in docs}
    n = len(docs)
    exclude_count = math.floor(n * (100.0 - percentile) / 100.0)
    for side, chunks in (("purpose", query.get("purpose_neg", [])),
                         ("mechanism", query.get("mech_neg", []))):
        for chunk in chunks:
            vec = [embed(chunk, table, stopwords)]
            assert vec[0] is not None
            dists = {
                doc["id"]: side_distance(method, vec, doc, side, table, stopwords)
                for doc in docs
            }
            if exclude_count <= 0:
                continue
            cutoff = sorted(dists.values())[exclude_count]
            allowed &= {doc_id for doc_id, d in dists.items() if d >= cutoff}

    excluded = sorted({doc["id"] for doc in docs} - allowed)
    if not allowed:
        return [], excluded, True

    scored = []
    for doc in docs:
        if doc["id"] not in allowed:
            continue
        parts = []
        d_p = d_m = None
        if purpose_pos:
            d_p = side_distance(method, purpose_pos, doc, "purpose", table, stopwords)
            parts.append(d_p)
        if mech_pos:
            d_m = side_distance(method, mech_pos, doc, "mechanism", table, stopwords)
            parts.append(d_m)
        if combine == "purpose-only":
            score = d_p if d_p is not None else 2.0
        elif combine == "sum":
            score = sum(parts)
        else:
            score = sum(parts) / len(parts)
        scored.append((score, doc["id"]))
    scored.sort()
    return [(doc_id, score) for score, doc_id in scored[:limit]], excluded, False


# ------------------------------------------------------------- clustering

def silhouette_reference(points, assignments):
    """Literal O(n^2) silhouette: per-point mean intra/inter distances."""
    n = len(points)
    def dist(i, j):
        return math.sqrt(sum((a - b) ** 2 for a, b in zip(points[i], points[j])))
    labels = sorted(set(assignments))
    total = 0.0
    for i in range(n):
        own = assignments[i]
        own_members = [j for j in range(n) if assignments[j] == own and j != i]
        if not own_members:
            continue  # singleton contributes 0
        a = sum(dist(i, j) for j in own_members) / len(own_members)
        b = math.inf
        for label in labels:
            if label == own:
                continue
            members = [j for j in range(n) if assignments[j] == label]
            b = min(b, sum(dist(i, j) for j in members) / len(members))
        m = max(a, b)
        total += (b - a) / m if m > 0 else 0.0
    return total / n


# --------------------------------------------------------------- pagerank

def pagerank_reference(weights, damping=0.85, tol=1e-12, max_iters=10000):
    """Dense power iteration on the explicit Google matrix."""
    n = len(weights)
    transition = []
    for i in range(n):
        total = sum(weights[i])
        if total > 0:
            transition.append([w / total for w in weights[i]])
        else:
            transition.append([1.0 / n] * n)
    google = [
        [damping * transition[i][j] + (1.0 - damping) / n for j in range(n)]
        for i in range(n)
    ]
    scores = [1.0 / n] * n
    for _ in range(max_iters):
        updated = [sum(google[i][j] * scores[i] for i in range(n)) for j in range(n)]
        if sum(abs(u - s) for u, s in zip(updated, scores)) < tol:
            return updated
        scores = updated
    return scores


# ------------------------------------------------------------ rule mining

def count_rules(transactions, min_support, min_confidence):
    """Direct double-loop rule counting over transaction sets.

    ``transactions`` is a list of (doc_id, set-of-concept-ids).  Returns
    {(antecedent, consequent): (support, confidence)}.
    """
    items = set()
    for _, concepts in transactions:
        items |= concepts
    out = {}
    for a in items:
        for b in items:
            if a == b:
                continue
            n_a = sum(1 for _, c in transactions if a in c)
            n_ab = sum(1 for _, c in transactions if a in c and b in c)
            if n_a == 0 or n_ab < min_support:
                continue
            confidence = n_ab / n_a
            if confidence >= min_confidence:
                out[(a, b)] = (n_ab, confidence)
    return out


# ----------------------------------------------------------------- scoring

def token_tally_scores(docs_gold, docs_pred):
    """Token-level per-class P/R/F1 by direct containment counting.

    Documents are dicts with "text" and "spans"; a token belongs to the
    highest-precedence span containing its start offset (purpose first,
    then earlier start, then longer span).
    """
    def token_starts(text):
        starts = []
        offset = 0
        for raw in text.split():
            begin = text.index(raw, offset)
            inner = begin
            for tok in simple_tokens(raw):
                inner = text.index(tok, inner)
                starts.append(inner)
                inner += len(tok)
            offset = begin + len(raw)
        return starts

    def label_at(start, spans):
        best = None
        best_key = None
        for span in spans:
            if span["start"] <= start < span["end"]:
                key = (0 if span["label"] == "purpose" else 1,
                       span["start"], -(span["end"] - span["start"]))
                if best_key is None or key < best_key:
                    best, best_key = span["label"], key
        return best

    tallies = {"purpose": [0, 0, 0], "mechanism": [0, 0, 0]}  # tp, pred, gold
    for gold, pred in zip(docs_gold, docs_pred):
        for start in token_starts(gold["text"]):
            g = label_at(start, gold["spans"])
            p = label_at(start, pred["spans"])
            if p is not None:
                tallies[p][1] += 1
            if g is not None:
                tallies[g][2] += 1
                if p == g:
                    tallies[g][0] += 1
    result = {}
    for label, (tp, pred_n, gold_n) in tallies.items():
        precision = tp / pred_n if pred_n else 0.0
        recall = tp / gold_n if gold_n else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        result[label] = (precision, recall, f1)
    tp = sum(t[0] for t in tallies.values())
    pred_n = sum(t[1] for t in tallies.values())
    gold_n = sum(t[2] for t in tallies.values())
    precision = tp / pred_n if pred_n else 0.0
    recall = tp / gold_n if gold_n else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    result["micro"] = (precision, recall, f1)
    return result


# ------------------------------------------------------------- agreement

def agreement_tally(boxes, marks, min_raters=2, min_spans=2):
    """Direct tally of span- and box-level agreement.

    ``boxes``: list of (condition, span_count); ``marks``: list of
    (rater_id, box_index, span_index).  Returns two dicts keyed by
    condition.
    """
    raters_per_span = {}
    for rater, box_idx, span_idx in marks:
        raters_per_span.setdefault((box_idx, span_idx), set()).add(rater)
    span_shown = {}
    span_hit = {}
    box_shown = {}
    box_hit = {}
    for box_idx, (condition, span_count) in enumerate(boxes):
        span_shown[condition] = span_shown.get(condition, 0) + span_count
        box_shown[condition] = box_shown.get(condition, 0) + 1
        qualifying = 0
        for span_idx in range(span_count):
            if len(raters_per_span.get((box_idx, span_idx), set())) >= min_raters:
                span_hit[condition] = span_hit.get(condition, 0) + 1
                qualifying += 1
        if qualifying >= min_spans:
            box_hit[condition] = box_hit.get(condition, 0) + 1
    spans = {c: span_hit.get(c, 0) / span_shown[c] for c in span_shown}
    boxes_out = {c: box_hit.get(c, 0) / box_shown[c] for c in box_shown}
    return spans, boxes_out
