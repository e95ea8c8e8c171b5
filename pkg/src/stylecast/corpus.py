"""Comment corpora: tokenization, vocabularies, length filtering and splits."""
from __future__ import annotations

import hashlib
import json
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Sequence

import regex

from ._io import (
    FormatError,
    StylecastError,
    VocabularyMismatch,
    fingerprint,
    load_artifact,
    read_data_lines,
    save_artifact,
)

UNK = "<unk>"
BOS = "<bos>"
EOS = "<eos>"
SPECIALS = (UNK, BOS, EOS)

_GRAPHEME = regex.compile(r"\X")
_EMOJI_PRESENTATION = regex.compile(r"\p{Emoji_Presentation}")
_PICTOGRAPHIC = regex.compile(r"\p{Extended_Pictographic}")
_APOSTROPHES = ("'", "’")


# ---------------------------------------------------------------------------
# Tokenization
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def emoticons() -> tuple[str, ...]:
    """The emoticon lexicon, longest entries first."""
    entries = {line.strip() for line in read_data_lines("emoticons.txt")}
    return tuple(sorted(entries, key=lambda e: (-len(e), e)))


def is_emoji(grapheme: str) -> bool:
    """True for a single emoji grapheme cluster (incl. ZWJ, flag, keycap sequences)."""
    if not grapheme:
        return False
    if _EMOJI_PRESENTATION.search(grapheme):
        return True
    if "⃣" in grapheme:
        return True
    if _PICTOGRAPHIC.search(grapheme):
        # text-default symbols such as (c) or TM only count with VS16
        return "️" in grapheme or any(ord(c) >= 0x2300 for c in grapheme)
    return False


def _is_wordish(grapheme: str) -> bool:
    return grapheme[0].isalnum()


def _emoticon_at(chunk: str, pos: int) -> str | None:
    for emo in emoticons():
        if not chunk.startswith(emo, pos):
            continue
        end = pos + len(emo)
        if emo[0].isalnum() and pos > 0 and chunk[pos - 1].isalnum():
            continue
        if emo[-1].isalnum() and end < len(chunk) and chunk[end].isalnum():
            continue
        return emo
    return None


def _tokenize_chunk(chunk: str) -> list[str]:
    graphemes = _GRAPHEME.findall(chunk)
    starts = []
    offset = 0
    for g in graphemes:
        starts.append(offset)
        offset += len(g)
    starts.append(offset)

    at = {p: k for k, p in enumerate(starts)}

    out = []
    i = 0
    n = len(graphemes)
    while i < n:
        pos = starts[i]
        emo = _emoticon_at(chunk, pos)
        # an emoticon may not end inside a grapheme cluster (e.g. before a skin tone)
        if emo is not None and (pos + len(emo)) in at:
            out.append(emo)
            i = at[pos + len(emo)]
            continue
        g = graphemes[i]
        if is_emoji(g):
            out.append(g)
            i += 1
            continue
        if _is_wordish(g):
            j = i + 1
            while j < n:
                if is_emoji(graphemes[j]):
                    break
                if _is_wordish(graphemes[j]):
                    j += 1
                elif (
                    graphemes[j] in _APOSTROPHES
                    and j + 1 < n
                    and _is_wordish(graphemes[j + 1])
                    and not is_emoji(graphemes[j + 1])
                ):
                    j += 2
                else:
                    break
            out.append("".join(graphemes[i:j]))
            i = j
            continue
        j = i + 1
        while j < n and graphemes[j] == g and _emoticon_at(chunk, starts[j]) is None:
            j += 1
        out.append("".join(graphemes[i:j]))
        i = j
    return out


def tokenize(text) -> list[str]:
    """Split social-media text into words, punctuation runs, emoticons and emoji.

    Case is preserved and nothing is dropped: joining the tokens with single
    spaces and re-tokenizing gives the same list back.

    >>> tokenize("great!!! 😍😍")
    ['great', '!!!', '😍', '😍']
    """
    if isinstance(text, (bytes, bytearray)):
        text = bytes(text).decode("utf-8")
    tokens = []
    for chunk in text.split():
        tokens.extend(_tokenize_chunk(chunk))
    return tokens


def detokenize(tokens: Iterable[str]) -> str:
    return " ".join(tokens)


# ---------------------------------------------------------------------------
# Data types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Comment:
    tokens: tuple[str, ...]
    source_id: str
    meta: dict | None = None

    def __len__(self) -> int:
        return len(self.tokens)


@dataclass(frozen=True)
class Corpus:
    comments: tuple[Comment, ...]
    provenance: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.comments)

    def __iter__(self):
        return iter(self.comments)

    def token_lists(self) -> list[tuple[str, ...]]:
        return [c.tokens for c in self.comments]

    @classmethod
    def from_texts(cls, texts: Iterable[str], source: str = "<memory>") -> "Corpus":
        comments = []
        for i, text in enumerate(texts):
            toks = tokenize(text)
            if toks:
                comments.append(Comment(tuple(toks), str(i + 1)))
        return cls(tuple(comments), {"source": source, "filters": []})

    @classmethod
    def from_token_lists(cls, token_lists: Iterable[Sequence[str]], source: str = "<memory>") -> "Corpus":
        comments = tuple(
            Comment(tuple(toks), str(i + 1)) for i, toks in enumerate(token_lists)
        )
        return cls(comments, {"source": source, "filters": []})


class Vocabulary:
    """Token <-> id map. Ids 0, 1, 2 are UNK, BOS, EOS; the rest follow
    descending training frequency, ties broken lexicographically."""

    def __init__(self, tokens: Sequence[str], freq: dict[str, int], min_freq: int = 1):
        tokens = tuple(tokens)
        if tokens[: len(SPECIALS)] != SPECIALS:
            raise FormatError("vocabulary must start with the special tokens")
        if len(set(tokens)) != len(tokens):
            raise FormatError("duplicate tokens in vocabulary")
        self.tokens = tokens
        self.freq = {t: int(freq.get(t, 0)) for t in tokens}
        self.min_freq = int(min_freq)
        self.index = {t: i for i, t in enumerate(tokens)}
        self.fingerprint = fingerprint(tokens)

    unk_id = 0
    bos_id = 1
    eos_id = 2

    def __len__(self) -> int:
        return len(self.tokens)

    def __contains__(self, token: str) -> bool:
        return token in self.index

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Vocabulary)
            and self.tokens == other.tokens
            and self.freq == other.freq
            and self.min_freq == other.min_freq
        )

    def __repr__(self) -> str:
        return f"Vocabulary(n={len(self)}, min_freq={self.min_freq}, fingerprint={self.fingerprint})"

    @property
    def words(self) -> tuple[str, ...]:
        """Non-special tokens, in id order."""
        return self.tokens[len(SPECIALS):]

    def encode(self, tokens: Iterable[str], strict: bool = False) -> list[int]:
        ids = []
        for t in tokens:
            i = self.index.get(t)
            if i is None:
                if strict:
                    raise VocabularyMismatch(f"token {t!r} is not in the vocabulary")
                i = self.unk_id
            ids.append(i)
        return ids

    def decode(self, ids: Iterable[int]) -> list[str]:
        return [self.tokens[i] for i in ids]

    def to_dict(self) -> dict:
        return {
            "min_freq": self.min_freq,
            "fingerprint": self.fingerprint,
            "tokens": list(self.tokens),
            "freq": [self.freq[t] for t in self.tokens],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "Vocabulary":
        tokens = doc["tokens"]
        vocab = cls(tokens, dict(zip(tokens, doc["freq"])), doc.get("min_freq", 1))
        if doc.get("fingerprint", vocab.fingerprint) != vocab.fingerprint:
            raise FormatError("vocabulary fingerprint does not match its tokens")
        return vocab

    def save(self, path) -> None:
        save_artifact(path, "vocabulary", self.to_dict())

    @classmethod
    def load(cls, path) -> "Vocabulary":
        return cls.from_dict(load_artifact(path, "vocabulary"))


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------


def build_vocabulary(corpus: Corpus, min_freq: int = 5) -> Vocabulary:
    """Keep tokens seen at least ``min_freq`` times in ``corpus``."""
    if len(corpus) == 0:
        raise StylecastError("cannot build a vocabulary from an empty corpus")
    counts = Counter()
    for comment in corpus:
        counts.update(t for t in comment.tokens if t not in SPECIALS)
    kept = sorted((t for t, c in counts.items() if c >= min_freq), key=lambda t: (-counts[t], t))
    freq = {t: counts[t] for t in kept}
    freq[UNK] = sum(c for t, c in counts.items() if c < min_freq)
    return Vocabulary(SPECIALS + tuple(kept), freq, min_freq)


def filter_corpus(corpus: Corpus, max_len: int = 20, vocab: Vocabulary | None = None) -> Corpus:
    """Drop comments longer than ``max_len`` (or empty) and map OOV tokens to UNK.

    With ``vocab=None`` only the length filter is applied.
    """
    kept = []
    for comment in corpus:
        if not 1 <= len(comment) <= max_len:
            continue
        if vocab is not None:
            toks = tuple(t if t in vocab.index and t not in (BOS, EOS) else UNK for t in comment.tokens)
            comment = Comment(toks, comment.source_id, comment.meta)
        kept.append(comment)
    provenance = dict(corpus.provenance)
    provenance["filters"] = list(corpus.provenance.get("filters", [])) + [
        {
            "max_len": max_len,
            "vocab": vocab.fingerprint if vocab is not None else None,
            "min_freq": vocab.min_freq if vocab is not None else None,
            "removed": len(corpus) - len(kept),
        }
    ]
    return Corpus(tuple(kept), provenance)


@dataclass(frozen=True)
class SplitSpec:
    train_fraction: Fraction = Fraction(28, 30)
    valid_fraction: Fraction = Fraction(1, 30)
    test_fraction: Fraction = Fraction(1, 30)
    seed: int = 0

    def __post_init__(self):
        fracs = tuple(Fraction(str(f)) if isinstance(f, float) else Fraction(f) for f in self.fractions)
        if any(f < 0 for f in fracs):
            raise ValueError("split fractions must be nonnegative")
        if sum(fracs) != 1:
            raise ValueError(f"split fractions must sum to 1, got {float(sum(fracs))}")
        object.__setattr__(self, "train_fraction", fracs[0])
        object.__setattr__(self, "valid_fraction", fracs[1])
        object.__setattr__(self, "test_fraction", fracs[2])

    @property
    def fractions(self):
        return (self.train_fraction, self.valid_fraction, self.test_fraction)

    @classmethod
    def parse(cls, text: str, seed: int = 0) -> "SplitSpec":
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 3:
            raise ValueError("split must have three comma-separated fractions")
        return cls(*(Fraction(p) for p in parts), seed=seed)


def _part_sizes(m: int, fractions) -> list[int]:
    # largest remainder; ties go to the earlier part
    exact = [f * m for f in fractions]
    sizes = [int(e) for e in exact]
    short = m - sum(sizes)
    order = sorted(range(3), key=lambda i: (-(exact[i] - sizes[i]), i))
    for i in order[:short]:
        sizes[i] += 1
    return sizes


def _shuffle_key(seed: int, i: int) -> bytes:
    return hashlib.sha256(f"{seed}:{i}".encode()).digest()


def split(corpus: Corpus, spec: SplitSpec) -> tuple[Corpus, Corpus, Corpus]:
    """Deterministic train/valid/test partition.

    The shuffle orders comments by SHA-256 of ``"{seed}:{index}"``, so it does
    not depend on any RNG implementation.
    """
    m = len(corpus)
    if all(f > 0 for f in spec.fractions) and m < 3:
        raise StylecastError(f"cannot split {m} comments into three non-empty parts")
    order = sorted(range(m), key=lambda i: _shuffle_key(spec.seed, i))
    sizes = _part_sizes(m, spec.fractions)
    parts = []
    start = 0
    for name, size in zip(("train", "valid", "test"), sizes):
        idx = sorted(order[start:start + size])
        start += size
        prov = dict(corpus.provenance)
        prov["split"] = {
            "part": name,
            "fractions": [str(f) for f in spec.fractions],
            "seed": spec.seed,
        }
        parts.append(Corpus(tuple(corpus.comments[i] for i in idx), prov))
    return tuple(parts)


# ---------------------------------------------------------------------------
# I/O
# ---------------------------------------------------------------------------


def _read_jsonl(path: Path) -> list[Comment]:
    comments = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise FormatError(f"{path}:{lineno}: invalid JSON ({exc.msg})") from None
            if not isinstance(obj, dict) or not isinstance(obj.get("text"), str):
                raise FormatError(f"{path}:{lineno}: expected an object with a 'text' string")
            toks = tokenize(obj["text"])
            if not toks:
                continue
            meta = obj.get("meta")
            if meta is not None:
                meta = {str(k): str(v) for k, v in meta.items()}
            comments.append(Comment(tuple(toks), str(obj.get("id", lineno)), meta))
    return comments


def _read_plain(path: Path) -> list[Comment]:
    comments = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            toks = tokenize(line)
            if toks:
                comments.append(Comment(tuple(toks), str(lineno)))
    return comments


def load_corpus(path) -> Corpus:
    """Read a corpus artifact (.json), JSON Lines (.jsonl) or plain text."""
    path = Path(path)
    if not path.exists():
        raise StylecastError(f"no such file: {path}")
    if path.suffix == ".json":
        doc = load_artifact(path, "corpus")
        comments = tuple(
            Comment(tuple(c["tokens"]), c["id"], c.get("meta")) for c in doc["comments"]
        )
        return Corpus(comments, doc["provenance"])
    try:
        comments = _read_jsonl(path) if path.suffix == ".jsonl" else _read_plain(path)
    except UnicodeDecodeError as exc:
        raise FormatError(f"{path}: not valid UTF-8 ({exc.reason})") from None
    return Corpus(tuple(comments), {"source": path.name, "filters": []})


def save_corpus(corpus: Corpus, path) -> None:
    comments = []
    for c in corpus:
        row = {"id": c.source_id, "tokens": list(c.tokens)}
        if c.meta:
            row["meta"] = c.meta
        comments.append(row)
    save_artifact(path, "corpus", {"provenance": corpus.provenance, "comments": comments})


def encode_corpus(corpus: Corpus, vocab: Vocabulary) -> list[list[int]]:
    """Token ids per comment; raises if the corpus was not filtered against ``vocab``."""
    return [vocab.encode(c.tokens, strict=True) for c in corpus]
