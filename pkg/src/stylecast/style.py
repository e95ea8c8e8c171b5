"""Corpus style-weight: argmax topic voting and the vote-weighted topic mixture."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._io import StylecastError, VocabularyMismatch, fingerprint, load_artifact, save_artifact
from .corpus import Vocabulary
from .topic import TopicModel


@dataclass(frozen=True)
class StyleWeight:
    """Nonnegative weights over ``tokens`` (entry i belongs to ``tokens[i]``)."""

    w: np.ndarray
    tokens: tuple[str, ...]
    y: tuple[float, ...] = ()
    provenance: dict = field(default_factory=dict)

    @property
    def vocab_fingerprint(self) -> str:
        return fingerprint(self.tokens)

    def to_dict(self) -> dict:
        return {
            "vocab_fingerprint": self.vocab_fingerprint,
            "y": list(self.y),
            "tokens": list(self.tokens),
            "w": self.w.tolist(),
            "provenance": self.provenance,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "StyleWeight":
        sw = cls(np.asarray(doc["w"], dtype=np.float64), tuple(doc["tokens"]),
                 tuple(doc.get("y", ())), doc.get("provenance", {}))
        if doc.get("vocab_fingerprint", sw.vocab_fingerprint) != sw.vocab_fingerprint:
            raise VocabularyMismatch("style-weight fingerprint does not match its tokens")
        return sw

    def save(self, path) -> None:
        save_artifact(path, "style_weight", self.to_dict())

    @classmethod
    def load(cls, path) -> "StyleWeight":
        return cls.from_dict(load_artifact(path, "style_weight"))


def vote_topics(model: TopicModel) -> tuple[np.ndarray, np.ndarray]:
    """One vote per comment for its most probable topic (lowest index on ties).

    Returns the M x K 0/1 vote matrix and the corpus topic distribution y.
    """
    if model.M < 1:
        raise StylecastError("topic model has no training comments")
    winners = np.argmax(model.theta, axis=1)  # first maximum wins
    votes = np.zeros((model.M, model.K), dtype=np.int64)
    votes[np.arange(model.M), winners] = 1
    y = votes.sum(axis=0) / model.M
    return votes, y


def mix_topics(y, phi) -> np.ndarray:
    """sum_k y[k] * phi[k], summed exactly per word.

    ``math.fsum`` is correctly rounded, so the result does not depend on the
    order of the topics.
    """
    y = [float(v) for v in y]
    phi = np.asarray(phi, dtype=np.float64)
    terms = [yk * phi[k] for k, yk in enumerate(y)]
    return np.array([math.fsum(col) for col in zip(*terms)], dtype=np.float64)


def compute_style_weight(model: TopicModel, model_id: str = "") -> StyleWeight:
    _, y = vote_topics(model)
    w = mix_topics(y, model.phi)
    provenance = {"model": model_id, "K": model.K, "vocab_fingerprint": model.vocab_fingerprint}
    return StyleWeight(w, model.words, tuple(float(v) for v in y), provenance)


def uniform_style(tokens) -> StyleWeight:
    tokens = tuple(tokens)
    return StyleWeight(np.full(len(tokens), 1.0 / len(tokens)), tokens, (), {"uniform": True})


def align_to_vocab(sw: StyleWeight, source_vocab, target_vocab) -> StyleWeight:
    """Re-index ``sw`` onto ``target_vocab``'s tokens.

    Shared tokens keep their weight; tokens only in the target (the special
    tokens among them) get the mean of the shared weights. The result is
    renormalized. ``source_vocab`` may be None to skip the fingerprint check;
    a Vocabulary or a token sequence is checked against ``sw.tokens``.
    """
    if source_vocab is not None:
        source_tokens = source_vocab.words if isinstance(source_vocab, Vocabulary) else tuple(source_vocab)
        if fingerprint(source_tokens) != sw.vocab_fingerprint:
            raise VocabularyMismatch("style-weight was not computed over the given source vocabulary")
    target = target_vocab.tokens if isinstance(target_vocab, Vocabulary) else tuple(target_vocab)
    index = {t: i for i, t in enumerate(sw.tokens)}
    shared = [index.get(t) for t in target]
    mapped = [sw.w[i] for i in shared if i is not None]
    if not mapped:
        raise VocabularyMismatch("style-weight and target vocabulary share no tokens")
    fill = math.fsum(mapped) / len(mapped)
    w = np.array([sw.w[i] if i is not None else fill for i in shared], dtype=np.float64)
    w = w / math.fsum(w)
    provenance = dict(sw.provenance)
    provenance["aligned_from"] = sw.vocab_fingerprint
    provenance["fill"] = fill
    return StyleWeight(w, target, sw.y, provenance)
