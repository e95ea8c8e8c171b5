"""Tokenizer, vocabulary, length filter, splits and corpus I/O."""
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stylecast._io import FormatError, StylecastError, VocabularyMismatch
from stylecast.corpus import (
    BOS, EOS, UNK, Comment, Corpus, SplitSpec, Vocabulary, build_vocabulary,
    emoticons, encode_corpus, filter_corpus, load_corpus, save_corpus, split,
    tokenize,
)


class TestTokenize:
    def test_words_and_punctuation(self):
        assert tokenize("love the boots!") == ["love", "the", "boots", "!"]

    def test_emoticons(self):
        assert tokenize("so cute :) <3") == ["so", "cute", ":)", "<3"]

    def test_punctuation_run_and_emoji(self):
        assert tokenize("great!!! 😍😍") == ["great", "!!!", "😍", "😍"]

    def test_case_preserved(self):
        assert tokenize("OMG Love IT") == ["OMG", "Love", "IT"]

    def test_apostrophe_stays_inside_word(self):
        assert tokenize("don't stop") == ["don't", "stop"]

    def test_emoticon_attached_to_word(self):
        assert tokenize("nice:)") == ["nice", ":)"]

    def test_alphanumeric_emoticon_needs_boundary(self):
        # "XD" is an emoticon on its own, but not inside a word
        assert tokenize("XD") == ["XD"]
        assert tokenize("XDXD") == ["XDXD"]

    def test_zwj_sequence_is_one_token(self):
        family = "👨‍👩‍👧"
        assert tokenize(f"hi {family}") == ["hi", family]

    def test_skin_tone_modifier_kept_with_emoji(self):
        assert tokenize("👍🏽!") == ["👍🏽", "!"]

    def test_bytes_input(self):
        assert tokenize("cute 💕".encode("utf-8")) == ["cute", "💕"]

    def test_empty(self):
        assert tokenize("") == []
        assert tokenize("   \n\t") == []

    def test_lexicon_sorted_longest_first(self):
        lengths = [len(e) for e in emoticons()]
        assert lengths == sorted(lengths, reverse=True)

    @settings(max_examples=300, deadline=None)
    @given(st.text(alphabet=st.one_of(st.sampled_from(list("ab! .:)(<3'😍💕-_^DXx\n")), st.characters()), max_size=40))
    def test_idempotent_and_whitespace_free(self, text):
        toks = tokenize(text)
        assert all(t and not any(c.isspace() for c in t) for t in toks)
        assert tokenize(" ".join(toks)) == toks


def _corpus(*texts):
    return Corpus.from_texts(texts)


class TestVocabulary:
    def test_threshold(self):
        corpus = _corpus(*(["nice"] * 7), "qwop")
        vocab = build_vocabulary(corpus, min_freq=5)
        assert "nice" in vocab
        assert "qwop" not in vocab
        assert vocab.freq[UNK] == 1

    def test_min_freq_one_keeps_everything(self):
        corpus = _corpus("a b c", "c d !")
        vocab = build_vocabulary(corpus, min_freq=1)
        assert set(vocab.words) == {"a", "b", "c", "d", "!"}

    def test_hand_counted_corpus(self):
        """Ten comments with counts: cute 6, so 5, ! 5, 😍 5, nice 4, others fewer."""
        texts = [
            "so cute !", "so cute 😍", "so cute !", "so cute 😍", "so cute !",
            "cute 😍 nice", "nice !", "nice 😍", "nice !", "😍 wow",
        ]
        vocab = build_vocabulary(_corpus(*texts), min_freq=5)
        assert vocab.words == ("cute", "!", "so", "😍")
        assert vocab.freq["cute"] == 6
        assert vocab.freq[UNK] == 4 + 1

    def test_ordering_and_specials(self):
        vocab = build_vocabulary(_corpus("b a b c a b"), min_freq=1)
        assert vocab.tokens[:3] == (UNK, BOS, EOS)
        assert vocab.words == ("b", "a", "c")

    def test_order_insensitive(self):
        texts = ["a b", "b c !", "a a :)", "c c c"]
        v1 = build_vocabulary(_corpus(*texts), min_freq=1)
        v2 = build_vocabulary(_corpus(*reversed(texts)), min_freq=1)
        assert v1 == v2
        assert v1.fingerprint == v2.fingerprint

    def test_round_trip_encode_decode(self):
        vocab = build_vocabulary(_corpus("a b c", "c b"), min_freq=1)
        toks = ["c", "a", "b", "b"]
        assert vocab.decode(vocab.encode(toks)) == toks

    def test_strict_encode_rejects_oov(self):
        vocab = build_vocabulary(_corpus("a b"), min_freq=1)
        assert vocab.encode(["zzz"]) == [vocab.unk_id]
        with pytest.raises(VocabularyMismatch):
            vocab.encode(["zzz"], strict=True)

    def test_save_load(self, tmp_path):
        vocab = build_vocabulary(_corpus("a b 😍", "b"), min_freq=1)
        vocab.save(tmp_path / "v.json")
        doc = json.loads((tmp_path / "v.json").read_text(encoding="utf-8"))
        assert doc["format_version"] == 1
        assert Vocabulary.load(tmp_path / "v.json") == vocab

    def test_empty_corpus_is_an_error(self):
        with pytest.raises(StylecastError):
            build_vocabulary(Corpus((), {}), min_freq=1)


class TestFilter:
    def test_long_comment_removed(self):
        corpus = _corpus("a " * 25, "a b")
        out = filter_corpus(corpus, max_len=20)
        assert [len(c) for c in out] == [2]

    def test_short_comments_unchanged(self):
        corpus = _corpus("a b", "c d e", "f")
        assert len(filter_corpus(corpus, 20)) == 3

    def test_three_long_comments(self):
        texts = ["w " * 50] * 3 + ["a b c"] * 10
        out = filter_corpus(_corpus(*texts), 20)
        assert len(out) == 13 - 3

    def test_boundary_length_kept(self):
        assert len(filter_corpus(_corpus("a " * 20), 20)) == 1

    def test_oov_becomes_unk_and_length_kept(self):
        corpus = _corpus("nice nice nice", "nice qwop")
        vocab = build_vocabulary(corpus, min_freq=2)
        out = filter_corpus(corpus, 20, vocab)
        assert out.comments[1].tokens == ("nice", UNK)

    def test_provenance_records_filter(self):
        out = filter_corpus(_corpus("a " * 30, "a"), 20)
        record = out.provenance["filters"][-1]
        assert record["max_len"] == 20
        assert record["removed"] == 1


class TestSplit:
    def test_sizes(self):
        corpus = _corpus(*[f"c{i}" for i in range(100)])
        parts = split(corpus, SplitSpec.parse("0.8,0.1,0.1", seed=42))
        assert [len(p) for p in parts] == [80, 10, 10]

    def test_degenerate_fractions(self):
        corpus = _corpus("a", "b", "c")
        train, valid, test = split(corpus, SplitSpec(1, 0, 0))
        assert train.comments == corpus.comments
        assert len(valid) == len(test) == 0

    def test_partition(self):
        corpus = _corpus(*[f"c{i}" for i in range(37)])
        parts = split(corpus, SplitSpec.parse("0.6,0.2,0.2", seed=3))
        ids = [c.source_id for p in parts for c in p]
        assert sorted(ids) == sorted(c.source_id for c in corpus)
        assert len(set(ids)) == 37

    def test_deterministic(self, tmp_path):
        corpus = _corpus(*[f"c{i}" for i in range(50)])
        for run in ("a", "b"):
            for name, part in zip(("tr", "va", "te"), split(corpus, SplitSpec(seed=7))):
                save_corpus(part, tmp_path / f"{run}-{name}.json")
        for name in ("tr", "va", "te"):
            assert (tmp_path / f"a-{name}.json").read_bytes() == (tmp_path / f"b-{name}.json").read_bytes()

    def test_seed_changes_assignment(self):
        corpus = _corpus(*[f"c{i}" for i in range(50)])
        a = split(corpus, SplitSpec.parse("0.5,0.25,0.25", seed=1))[1]
        b = split(corpus, SplitSpec.parse("0.5,0.25,0.25", seed=2))[1]
        assert a.comments != b.comments

    def test_fractions_must_sum_to_one(self):
        with pytest.raises(ValueError):
            SplitSpec.parse("0.5,0.1,0.1")

    def test_too_small_corpus(self):
        with pytest.raises(StylecastError):
            split(_corpus("a", "b"), SplitSpec())


class TestCorpusIO:
    def test_jsonl(self, tmp_path):
        path = tmp_path / "c.jsonl"
        path.write_text('{"id": "x", "text": "so cute :)"}\n\n{"id": "y", "text": "ok!", "meta": {"k": 1}}\n',
                        encoding="utf-8")
        corpus = load_corpus(path)
        assert corpus.token_lists() == [("so", "cute", ":)"), ("ok", "!")]
        assert corpus.comments[1].meta == {"k": "1"}

    def test_plain_text_ids_are_line_numbers(self, tmp_path):
        path = tmp_path / "c.txt"
        path.write_text("hello there\n\nbye\n", encoding="utf-8")
        corpus = load_corpus(path)
        assert [c.source_id for c in corpus] == ["1", "3"]

    def test_bad_json_line(self, tmp_path):
        path = tmp_path / "c.jsonl"
        path.write_text('{"id": 1, "text": "a"}\nnot json\n', encoding="utf-8")
        with pytest.raises(FormatError, match=":2:"):
            load_corpus(path)

    def test_invalid_utf8(self, tmp_path):
        path = tmp_path / "c.txt"
        path.write_bytes(b"ok\n\xff\xfe\n")
        with pytest.raises(FormatError):
            load_corpus(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(StylecastError, match="nope.jsonl"):
            load_corpus(tmp_path / "nope.jsonl")

    def test_artifact_round_trip(self, tmp_path):
        corpus = Corpus((Comment(("a", "😍"), "1", {"src": "x"}), Comment(("b",), "2")), {"source": "t", "filters": []})
        save_corpus(corpus, tmp_path / "c.json")
        assert load_corpus(tmp_path / "c.json") == corpus

    def test_encode_corpus_requires_filtering(self):
        corpus = _corpus("a b", "zzz")
        vocab = build_vocabulary(_corpus("a b"), min_freq=1)
        with pytest.raises(VocabularyMismatch):
            encode_corpus(corpus, vocab)
        assert encode_corpus(filter_corpus(corpus, 20, vocab), vocab)[1] == [vocab.unk_id]
