"""LDA over comments with collapsed Gibbs sampling."""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numba
import numpy as np

from ._io import StylecastError, VocabularyMismatch, load_artifact, save_artifact
from ._rng import Stream
from .corpus import SPECIALS, Comment, Corpus, Vocabulary


@dataclass(frozen=True)
class TopicConfig:
    K: int = 3
    alpha: float = 0.1
    beta: float = 0.01
    iterations: int = 1000
    burn_in: int = 200
    seed: int = 0

    def __post_init__(self):
        if self.K < 1:
            raise ValueError("K must be >= 1")
        if self.alpha <= 0 or self.beta <= 0:
            raise ValueError("alpha and beta must be positive")
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if not 0 <= self.burn_in < self.iterations:
            raise ValueError("burn_in must be in [0, iterations)")


@numba.njit(cache=True)
def _sweep(words, docs, z, n_dk, n_kw, n_k, alpha, beta, vbeta, uniforms):
    # one pass over every token position, in corpus order
    K = n_k.shape[0]
    p = np.empty(K)
    for i in range(words.shape[0]):
        w = words[i]
        d = docs[i]
        k = z[i]
        n_dk[d, k] -= 1
        n_kw[k, w] -= 1
        n_k[k] -= 1
        total = 0.0
        for t in range(K):
            total += (n_dk[d, t] + alpha) * (n_kw[t, w] + beta) / (n_k[t] + vbeta)
            p[t] = total
        u = uniforms[i] * total
        k = K - 1
        for t in range(K):
            if u < p[t]:
                k = t
                break
        z[i] = k
        n_dk[d, k] += 1
        n_kw[k, w] += 1
        n_k[k] += 1


@numba.njit(cache=True)
def _fold_in_sweep(words, z, n_k_doc, phi, alpha, uniforms):
    K = phi.shape[0]
    p = np.empty(K)
    for i in range(words.shape[0]):
        w = words[i]
        n_k_doc[z[i]] -= 1
        total = 0.0
        for t in range(K):
            total += (n_k_doc[t] + alpha) * phi[t, w]
            p[t] = total
        u = uniforms[i] * total
        k = K - 1
        for t in range(K):
            if u < p[t]:
                k = t
                break
        z[i] = k
        n_k_doc[k] += 1


class TopicModel:
    """A trained LDA model.

    ``phi`` is K x N over ``words`` (the vocabulary without special tokens),
    ``theta`` is M x K over the training comments in ``doc_ids``.
    """

    def __init__(self, config, words, vocab_fingerprint, word_topic, doc_topic, doc_ids, provenance=None):
        self.config = config
        self.words = tuple(words)
        self.vocab_fingerprint = vocab_fingerprint
        self.word_topic = np.asarray(word_topic, dtype=np.int64)  # K x N
        self.doc_topic = np.asarray(doc_topic, dtype=np.int64)  # M x K
        self.topic_totals = self.word_topic.sum(axis=1)
        self.doc_ids = tuple(doc_ids)
        self.provenance = dict(provenance or {})
        K, N = self.word_topic.shape
        b, a = self.config.beta, self.config.alpha
        self.phi = (self.word_topic + b) / (self.topic_totals[:, None] + N * b)
        self.theta = (self.doc_topic + a) / (self.doc_topic.sum(axis=1)[:, None] + K * a)

    @property
    def K(self) -> int:
        return self.word_topic.shape[0]

    @property
    def M(self) -> int:
        return self.doc_topic.shape[0]

    def permuted(self, order) -> "TopicModel":
        """Same model with topic ``order[j]`` relabelled as topic ``j``."""
        order = list(order)
        return TopicModel(
            self.config, self.words, self.vocab_fingerprint,
            self.word_topic[order], self.doc_topic[:, order], self.doc_ids, self.provenance,
        )

    def top_words(self, z: int, n: int = 10) -> list[str]:
        row = topic_word_vector(self, z)
        order = sorted(range(len(row)), key=lambda w: (-row[w], w))
        return [self.words[w] for w in order[:n]]

    def to_dict(self) -> dict:
        return {
            "config": asdict(self.config),
            "vocab_fingerprint": self.vocab_fingerprint,
            "words": list(self.words),
            "doc_ids": list(self.doc_ids),
            "phi": self.phi.tolist(),
            "theta": self.theta.tolist(),
            "counts": {
                "word_topic": self.word_topic.tolist(),
                "doc_topic": self.doc_topic.tolist(),
                "topic_totals": self.topic_totals.tolist(),
            },
            "provenance": self.provenance,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "TopicModel":
        counts = doc["counts"]
        K = len(counts["topic_totals"])
        word_topic = counts["word_topic"] or np.zeros((K, len(doc["words"])), dtype=np.int64)
        doc_topic = counts["doc_topic"] or np.zeros((0, K), dtype=np.int64)
        return cls(
            TopicConfig(**doc["config"]), doc["words"], doc["vocab_fingerprint"],
            word_topic, doc_topic, doc["doc_ids"], doc.get("provenance"),
        )

    def save(self, path) -> None:
        save_artifact(path, "topic_model", self.to_dict())

    @classmethod
    def load(cls, path) -> "TopicModel":
        return cls.from_dict(load_artifact(path, "topic_model"))


def _word_ids(comment: Comment, vocab: Vocabulary, strict: bool = True) -> list[int]:
    """Indices into ``vocab.words`` for the non-UNK tokens of ``comment``."""
    offset = len(SPECIALS)
    out = []
    for tok, i in zip(comment.tokens, vocab.encode(comment.tokens, strict=strict)):
        if i >= offset:
            out.append(i - offset)
        elif tok != SPECIALS[0] and strict:
            raise VocabularyMismatch(f"special token {tok!r} inside a comment")
    return out


def train_lda(corpus: Corpus, vocab: Vocabulary, config: TopicConfig) -> TopicModel:
    """Fit LDA by collapsed Gibbs sampling.

    UNK tokens are not sampled; comments left with no tokens are skipped and
    counted in the model's provenance. Estimates come from the count state
    after the last sweep.
    """
    if len(corpus) == 0:
        raise StylecastError("cannot train LDA on an empty corpus")
    N = len(vocab.words)
    if N == 0:
        raise StylecastError("vocabulary has no words")
    K = config.K
    docs, words, doc_ids = [], [], []
    skipped = 0
    for comment in corpus:
        ids = _word_ids(comment, vocab)
        if not ids:
            skipped += 1
            continue
        docs.extend([len(doc_ids)] * len(ids))
        words.extend(ids)
        doc_ids.append(comment.source_id)
    if not doc_ids:
        raise StylecastError("no comment has an in-vocabulary token")
    words = np.asarray(words, dtype=np.int64)
    docs = np.asarray(docs, dtype=np.int64)
    M = len(doc_ids)

    stream = Stream(config.seed)
    z = stream.below(K, len(words))
    n_dk = np.zeros((M, K), dtype=np.int64)
    n_kw = np.zeros((K, N), dtype=np.int64)
    np.add.at(n_dk, (docs, z), 1)
    np.add.at(n_kw, (z, words), 1)
    n_k = n_kw.sum(axis=1)

    alpha, beta = float(config.alpha), float(config.beta)
    for _ in range(config.iterations):
        _sweep(words, docs, z, n_dk, n_kw, n_k, alpha, beta, N * beta, stream.uniform(len(words)))

    provenance = {
        "trained_on": corpus.provenance,
        "comments": len(corpus),
        "skipped_empty": skipped,
        "tokens": int(len(words)),
        "rng": "PCG64",
    }
    return TopicModel(config, vocab.words, vocab.fingerprint, n_kw, n_dk, doc_ids, provenance)


def topic_word_vector(model: TopicModel, z: int) -> np.ndarray:
    if not 0 <= z < model.K:
        raise IndexError(f"topic {z} out of range for K={model.K}")
    return model.phi[z].copy()


def comment_topic_vector(model: TopicModel, m: int) -> np.ndarray:
    if not 0 <= m < model.M:
        raise IndexError(f"comment {m} out of range for M={model.M}")
    return model.theta[m].copy()


def infer_theta(model: TopicModel, comment: Comment, sweeps: int = 50, seed: int = 0,
                vocab: Vocabulary | None = None) -> np.ndarray:
    """Topic mixture of an unseen comment, with the topic-word counts held fixed."""
    if vocab is not None:
        if vocab.fingerprint != model.vocab_fingerprint:
            raise VocabularyMismatch("vocabulary does not match the topic model")
        ids = _word_ids(comment, vocab, strict=False)
    else:
        index = {w: i for i, w in enumerate(model.words)}
        ids = [index[t] for t in comment.tokens if t in index]
    if not ids:
        raise StylecastError("comment has no in-vocabulary tokens")
    words = np.asarray(ids, dtype=np.int64)
    K = model.K
    stream = Stream(seed)
    z = stream.below(K, len(words))
    n_k_doc = np.bincount(z, minlength=K).astype(np.int64)
    phi = np.ascontiguousarray(model.phi)
    alpha = float(model.config.alpha)
    for _ in range(max(1, sweeps)):
        _fold_in_sweep(words, z, n_k_doc, phi, alpha, stream.uniform(len(words)))
    return (n_k_doc + alpha) / (len(words) + K * alpha)
