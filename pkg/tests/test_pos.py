"""Rule-cascade tagger and the tag-file format."""
import logging

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stylecast._io import FormatError, StylecastError
from stylecast.corpus import tokenize
from stylecast.pos import TAGSET, TaggedSentence, format_tags, load_tags, parse_tags, tag, tag_token


class TestTagger:
    def test_lexicon_punct_emoji(self):
        assert tag(["love", "!", "😍"]).tag_names == ["VERB", "PUNCT", "EMOJI"]

    def test_emoticon(self):
        assert tag([":)"]).tag_names == ["EMOTICON"]

    def test_ly_suffix(self):
        assert tag(["quickly"]).tag_names == ["ADV"]

    def test_tagset_order(self):
        assert TAGSET[:4] == ("NOUN", "VERB", "ADJ", "ADV")
        assert TAGSET[-3:] == ("PUNCT", "EMOJI", "EMOTICON")
        assert len(TAGSET) == 14

    @pytest.mark.parametrize("token,expected", [
        ("the", "DET"), ("you", "PRON"), ("and", "CONJ"), ("42", "NUM"), ("3.5", "NUM"),
        ("running", "VERB"), ("jacket", "NOUN"), ("#tag", "X"), ("!!!", "PUNCT"),
        ("<3", "EMOTICON"), ("👍🏽", "EMOJI"), ("THE", "DET"),
    ])
    def test_cascade(self, token, expected):
        assert tag_token(token) == expected

    @settings(max_examples=300, deadline=None)
    @given(st.text(max_size=30))
    def test_total_and_deterministic(self, text):
        toks = tokenize(text)
        first = tag(toks)
        assert len(first.tags) == len(toks)
        assert all(0 <= t < len(TAGSET) for t in first.tags)
        assert tag(toks) == first

    def test_emoji_beats_lexicon(self, tmp_path, monkeypatch):
        (tmp_path / "lexicon.txt").write_text("😍 NOUN\n", encoding="utf-8")
        (tmp_path / "emoticons.txt").write_text(":)\n", encoding="utf-8")
        from stylecast import corpus, pos
        monkeypatch.setenv("STYLECAST_DATA_DIR", str(tmp_path))
        pos.lexicon.cache_clear()
        corpus.emoticons.cache_clear()
        try:
            assert pos.lexicon() == {"😍": "NOUN"}
            assert tag_token("😍") == "EMOJI"
        finally:
            monkeypatch.delenv("STYLECAST_DATA_DIR")
            pos.lexicon.cache_clear()
            corpus.emoticons.cache_clear()


class TestTagFiles:
    def test_parse_line(self):
        sentences, unknown = parse_tags(["love/VERB it/PRON !/PUNCT"])
        assert len(sentences) == 1
        assert sentences[0].tokens == ("love", "it", "!")
        assert sentences[0].tag_names == ["VERB", "PRON", "PUNCT"]
        assert unknown == 0

    def test_empty_file(self, tmp_path):
        path = tmp_path / "t.txt"
        path.write_text("", encoding="utf-8")
        assert load_tags(path) == []

    def test_unknown_tag_maps_to_x(self, tmp_path, caplog):
        sentences, unknown = parse_tags(["wat/FOO"])
        assert unknown == 1
        assert sentences[0].tag_names == ["X"]
        path = tmp_path / "t.txt"
        path.write_text("wat/FOO\n", encoding="utf-8")
        with caplog.at_level(logging.WARNING):
            load_tags(path)
        assert "1 tags" in caplog.text

    def test_escaped_slash(self):
        sentences, _ = parse_tags(["and\\/or/CONJ :/EMOTICON"])
        assert sentences[0].tokens == ("and/or", ":")

    def test_malformed(self):
        with pytest.raises(FormatError, match="line 2"):
            parse_tags(["a/NOUN", "notag"])

    def test_missing_file(self, tmp_path):
        with pytest.raises(StylecastError, match="missing.tags"):
            load_tags(tmp_path / "missing.tags")

    def test_format_round_trip(self):
        sentences = [tag(["so", "cute", ":/", "😍"]), tag(["a/b"])]
        parsed, unknown = parse_tags(format_tags(sentences).splitlines())
        assert parsed == sentences
        assert unknown == 0

    def test_length_check(self):
        with pytest.raises(ValueError):
            TaggedSentence(("a",), ())
