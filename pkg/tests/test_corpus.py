import json

import pytest

from ideafacets.corpus import (
    Corpus,
    CorpusError,
    load_corpus,
    parse_document,
    save_corpus,
    tokenize,
)


def write_jsonl(path, records):
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec) + "\n")


class TestTokenize:
    def test_punctuation_detached(self):
        assert [t.surface for t in tokenize("charge your phone.")] == [
            "charge", "your", "phone", ".",
        ]

    def test_empty(self):
        assert tokenize("") == []

    def test_intra_word_hyphen_kept(self):
        assert [t.surface for t in tokenize("Wi-Fi enabled")] == ["Wi-Fi", "enabled"]

    def test_leading_and_trailing_punctuation(self):
        assert [t.surface for t in tokenize('("hello,")')] == [
            "(", '"', "hello", ",", '"', ")",
        ]

    def test_offsets_strictly_increasing_and_surface_faithful(self):
        text = "It's a mix of \"Twister\", Simon-Says , and Whac-A-Mole!"
        tokens = tokenize(text)
        prev_end = 0
        for tok in tokens:
            assert tok.start >= prev_end
            assert text[tok.start : tok.end] == tok.surface
            prev_end = tok.end

    def test_unicode_offsets_are_code_points(self):
        text = "café ☃ snowman"
        tokens = tokenize(text)
        assert tokens[0].surface == "café"
        assert text[tokens[1].start : tokens[1].end] == "☃"


class TestLoadCorpus:
    def test_counts(self, tmp_path):
        path = tmp_path / "c.jsonl"
        write_jsonl(path, [{
            "id": "d1",
            "title": "t",
            "text": "heats water fast using a coil",
            "spans": [
                {"start": 0, "end": 11, "label": "purpose"},
                {"start": 12, "end": 16, "label": "purpose"},
                {"start": 25, "end": 29, "label": "mechanism"},
            ],
        }])
        corpus, stats = load_corpus(path)
        assert stats.documents == 1
        assert stats.purpose_spans == 2
        assert stats.mechanism_spans == 1

    def test_out_of_range_span_names_document(self, tmp_path):
        path = tmp_path / "c.jsonl"
        write_jsonl(path, [{"id": "bad-doc", "text": "short", "spans": [
            {"start": 0, "end": 99, "label": "purpose"}]}])
        with pytest.raises(CorpusError, match="bad-doc"):
            load_corpus(path)

    def test_duplicate_id_rejected(self, tmp_path):
        path = tmp_path / "c.jsonl"
        rec = {"id": "x", "text": "hello", "spans": []}
        write_jsonl(path, [rec, rec])
        with pytest.raises(CorpusError, match="duplicate"):
            load_corpus(path)

    def test_malformed_line_reports_line_number(self, tmp_path):
        path = tmp_path / "c.jsonl"
        path.write_text('{"id": "a", "text": "ok", "spans": []}\nnot json\n')
        with pytest.raises(CorpusError, match="line 2"):
            load_corpus(path)

    def test_fixture_counts_and_shares(self, fixture_corpus):
        stats = fixture_corpus.stats()
        assert stats.documents == 30
        # Label proportions track the reference regime (14.5% mechanism,
        # 15.9% purpose) within five points.
        assert abs(stats.token_shares["mechanism"] - 0.145) < 0.05
        assert abs(stats.token_shares["purpose"] - 0.159) < 0.05

    def test_round_trip_identical(self, fixture_corpus, tmp_path):
        path = tmp_path / "out.jsonl"
        save_corpus(fixture_corpus, path)
        reloaded, _ = load_corpus(path)
        assert len(reloaded) == len(fixture_corpus)
        for a, b in zip(fixture_corpus, reloaded):
            assert a == b

    def test_surface_matches_slice_everywhere(self, fixture_corpus):
        for doc in fixture_corpus:
            for span in doc.spans:
                assert span.surface == doc.text[span.start : span.end]

    def test_overlapping_spans_allowed(self):
        doc = parse_document({
            "id": "d", "text": "clean water fast",
            "spans": [
                {"start": 0, "end": 11, "label": "purpose"},
                {"start": 6, "end": 16, "label": "mechanism"},
            ],
        })
        Corpus([doc])  # validates without raising
