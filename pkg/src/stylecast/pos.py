"""Coarse part-of-speech tags for comments.

The built-in tagger is a fixed rule cascade; it aims for a tag inventory that
is consistent between corpora rather than for accuracy. Stronger external
taggers can be plugged in through tag files (``surface/TAG`` per token).
"""
from __future__ import annotations

import logging
import re
import unicodedata
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

from ._io import FormatError, StylecastError, read_data_lines
from .corpus import emoticons, is_emoji

log = logging.getLogger(__name__)

TAGSET = (
    "NOUN", "VERB", "ADJ", "ADV", "PRON", "DET", "ADP", "NUM",
    "CONJ", "PRT", "X", "PUNCT", "EMOJI", "EMOTICON",
)
TAG_ID = {t: i for i, t in enumerate(TAGSET)}
TAGGER_ID = "stylecast-cascade-1"

_NUMERAL = re.compile(r"^[+-]?(\d+([.,:]\d+)*|\d*[.,]\d+)(st|nd|rd|th|s|k|%)?$", re.IGNORECASE)
_SUFFIXES = (
    ("ly", "ADV"),
    ("ing", "VERB"),
    ("ed", "VERB"),
    ("ous", "ADJ"),
    ("ful", "ADJ"),
    ("ive", "ADJ"),
    ("able", "ADJ"),
    ("ible", "ADJ"),
    ("less", "ADJ"),
    ("est", "ADJ"),
)


@dataclass(frozen=True)
class TaggedSentence:
    tokens: tuple[str, ...]
    tags: tuple[int, ...]

    def __post_init__(self):
        if len(self.tokens) != len(self.tags):
            raise ValueError("tokens and tags differ in length")

    @property
    def tag_names(self) -> list[str]:
        return [TAGSET[t] for t in self.tags]


@lru_cache(maxsize=None)
def lexicon() -> dict[str, str]:
    entries = {}
    for line in read_data_lines("lexicon.txt"):
        word, tag = line.split()
        if tag not in TAG_ID:
            raise FormatError(f"lexicon tag {tag!r} is not in the tag set")
        entries.setdefault(word.lower(), tag)
    return entries


def _is_punct(token: str) -> bool:
    return all(unicodedata.category(c)[0] in "PS" for c in token)


def _is_alpha(token: str) -> bool:
    return token.replace("'", "").replace("’", "").isalpha()


def tag_token(token: str) -> str:
    if is_emoji(token):
        return "EMOJI"
    if token in emoticons():
        return "EMOTICON"
    if _is_punct(token):
        return "PUNCT"
    lower = token.lower()
    entry = lexicon().get(lower)
    if entry is not None:
        return entry
    if _NUMERAL.match(token):
        return "NUM"
    if not _is_alpha(token):
        return "X"
    for suffix, tag in _SUFFIXES:
        if lower.endswith(suffix) and len(lower) > len(suffix) + 2:
            return tag
    return "NOUN"


def tag(tokens) -> TaggedSentence:
    tokens = tuple(tokens)
    return TaggedSentence(tokens, tuple(TAG_ID[tag_token(t)] for t in tokens))


def tag_corpus(token_lists) -> list[TaggedSentence]:
    return [tag(toks) for toks in token_lists]


def _split_item(item: str):
    # last slash not preceded by a backslash separates surface and tag
    for i in range(len(item) - 1, -1, -1):
        if item[i] == "/" and (i == 0 or item[i - 1] != "\\"):
            return item[:i].replace("\\/", "/"), item[i + 1:]
    return None


def parse_tags(lines) -> tuple[list[TaggedSentence], int]:
    """Parse tag-file lines; returns the sentences and the number of unknown tags."""
    sentences = []
    unknown = 0
    for lineno, line in enumerate(lines, 1):
        line = line.rstrip("\n")
        if not line.strip():
            continue
        tokens, tags = [], []
        for item in line.split(" "):
            parts = _split_item(item)
            if parts is None or not parts[0] or not parts[1]:
                raise FormatError(f"line {lineno}: malformed item {item!r}")
            surface, name = parts
            if name not in TAG_ID:
                unknown += 1
                name = "X"
            tokens.append(surface)
            tags.append(TAG_ID[name])
        sentences.append(TaggedSentence(tuple(tokens), tuple(tags)))
    return sentences, unknown


def load_tags(path) -> list[TaggedSentence]:
    path = Path(path)
    if not path.exists():
        raise StylecastError(f"no such file: {path}")
    with open(path, encoding="utf-8") as fh:
        sentences, unknown = parse_tags(fh)
    if unknown:
        log.warning("%s: %d tags outside the tag set were mapped to X", path, unknown)
    return sentences


def format_tags(sentences) -> str:
    lines = []
    for s in sentences:
        lines.append(" ".join(f"{tok.replace('/', chr(92) + '/')}/{TAGSET[t]}" for tok, t in zip(s.tokens, s.tags)))
    return "\n".join(lines) + ("\n" if lines else "")
