"""Interpolated add-k n-gram language model over a fixed vocabulary."""
from __future__ import annotations

from collections import defaultdict
from dataclasses import asdict, dataclass

import numpy as np

from ._io import StylecastError, load_artifact, save_artifact
from .corpus import Corpus, Vocabulary, encode_corpus


@dataclass(frozen=True)
class LmConfig:
    order: int = 3
    k: float = 0.1
    seed: int = 0  # unused; kept so every stage config carries a seed

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("order must be >= 1")
        if self.k <= 0:
            raise ValueError("k must be positive")


class NgramLM:
    """n-gram counts with recursive add-k interpolation.

    For a context h of length n-1 seen c(h) times::

        P_n(w | h) = (c(h, w) + k V P_{n-1}(w | h')) / (c(h) + k V)

    where h' drops the oldest token of h, V counts every token except BOS,
    and P_0 is uniform. An unseen context therefore falls back to the
    lower-order distribution. BOS always gets probability 0.
    """

    def __init__(self, vocab: Vocabulary, config: LmConfig, counts):
        self.vocab = vocab
        self.config = config
        # counts[n - 1]: context tuple of length n - 1 -> {token id: count}
        self.counts = counts
        self.totals = [{ctx: sum(nxt.values()) for ctx, nxt in table.items()} for table in counts]
        self.V = len(vocab) - 1
        self._uniform = np.full(len(vocab), 1.0 / self.V)
        self._uniform[vocab.bos_id] = 0.0
        self._cache: dict[tuple, np.ndarray] = {}

    @property
    def vocab_fingerprint(self) -> str:
        return self.vocab.fingerprint

    @property
    def order(self) -> int:
        return self.config.order

    def count(self, context, token) -> int:
        context = tuple(context)
        return self.counts[len(context)].get(context, {}).get(token, 0)

    def mle_prob(self, context, token) -> float:
        """Unsmoothed relative frequency c(context, token) / c(context)."""
        context = tuple(context)
        total = self.totals[len(context)].get(context, 0)
        if total == 0:
            raise StylecastError(f"context {context} never observed")
        return self.count(context, token) / total

    def next_token_dist(self, history) -> np.ndarray:
        """Distribution over vocabulary ids for the token after ``history``.

        ``history`` holds the ids generated so far; BOS is prepended here.
        """
        full = (self.vocab.bos_id,) + tuple(history)
        key = full[-(self.order - 1):] if self.order > 1 else ()
        cached = self._cache.get(key)
        if cached is not None:
            return cached.copy()
        kv = self.config.k * self.V
        p = self._uniform
        for n in range(1, self.order + 1):
            if n - 1 > len(key):
                break
            ctx = key[len(key) - (n - 1):] if n > 1 else ()
            nxt = self.counts[n - 1].get(ctx)
            if nxt is None:
                continue
            c = np.zeros(len(self.vocab))
            for tok, cnt in nxt.items():
                c[tok] = cnt
            p = (c + kv * p) / (self.totals[n - 1][ctx] + kv)
        self._cache[key] = p
        return p.copy()

    def to_dict(self) -> dict:
        tables = []
        for table in self.counts:
            rows = []
            for ctx in sorted(table):
                rows.append([list(ctx), [[t, c] for t, c in sorted(table[ctx].items())]])
            tables.append(rows)
        return {
            "config": asdict(self.config),
            "vocab_fingerprint": self.vocab.fingerprint,
            "vocabulary": self.vocab.to_dict(),
            "counts": tables,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "NgramLM":
        vocab = Vocabulary.from_dict(doc["vocabulary"])
        counts = []
        for rows in doc["counts"]:
            counts.append({tuple(ctx): {t: c for t, c in nxt} for ctx, nxt in rows})
        return cls(vocab, LmConfig(**doc["config"]), counts)

    def save(self, path) -> None:
        save_artifact(path, "ngram_lm", self.to_dict())

    @classmethod
    def load(cls, path) -> "NgramLM":
        return cls.from_dict(load_artifact(path, "ngram_lm"))


def train_lm(corpus: Corpus, vocab: Vocabulary, config: LmConfig) -> NgramLM:
    """Count n-grams of orders 1..order over BOS + comment + EOS."""
    if len(corpus) == 0:
        raise StylecastError("cannot train a language model on an empty corpus")
    counts = [defaultdict(lambda: defaultdict(int)) for _ in range(config.order)]
    for ids in encode_corpus(corpus, vocab):
        seq = [vocab.bos_id] + ids + [vocab.eos_id]
        for i in range(1, len(seq)):
            for n in range(1, config.order + 1):
                if i - (n - 1) < 0:
                    break
                counts[n - 1][tuple(seq[i - n + 1:i])][seq[i]] += 1
    frozen = [{ctx: dict(nxt) for ctx, nxt in table.items()} for table in counts]
    return NgramLM(vocab, config, frozen)


def next_token_dist(lm: NgramLM, history) -> np.ndarray:
    return lm.next_token_dist(history)
