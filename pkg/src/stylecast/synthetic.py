"""Synthetic comment corpora with known topic structure, for demos and tests."""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._rng import Stream
from .corpus import Comment, Corpus, build_vocabulary

# Two disjoint 10-word vocabularies: an emoji-heavy "netizen" register and a
# plain descriptive one.
STYLE_A = ("omg", "sooo", "cute", "😍", "<3", "!!!", ":)", "luv", "xoxo", "💕")
STYLE_B = ("nice", "jacket", "colors", "outfit", "great", "shoes", "look", "the", "coat", "style")


def zipf_weights(n: int, s: float = 1.0) -> np.ndarray:
    w = 1.0 / np.arange(1, n + 1) ** s
    return w / w.sum()


def _draw(probs: np.ndarray, u: float) -> int:
    return min(int(np.searchsorted(np.cumsum(probs), u, side="right")), len(probs) - 1)


def two_topic_corpus(n_comments: int = 200, mix: float = 0.5, seed: int = 0,
                     lengths: tuple[int, int] = (6, 12), zipf: float = 0.0,
                     vocab_a=STYLE_A, vocab_b=STYLE_B) -> tuple[Corpus, list[int]]:
    """Comments drawn wholly from ``vocab_a`` (label 0) or ``vocab_b`` (label 1).

    Exactly ``round(mix * n_comments)`` comments are A comments, at shuffled
    positions. Words within a topic follow a Zipf law with exponent ``zipf``
    (0 gives uniform words). Returns the corpus and the generating label of
    each comment.
    """
    stream = Stream(seed)
    lo, hi = lengths
    pa = zipf_weights(len(vocab_a), zipf)
    pb = zipf_weights(len(vocab_b), zipf)
    n_a = int(round(mix * n_comments))
    keys = stream.uniform(n_comments)
    order = sorted(range(n_comments), key=lambda i: (keys[i], i))
    labels = [1] * n_comments
    for i in order[:n_a]:
        labels[i] = 0
    comments = []
    for m, label in enumerate(labels):
        length = lo + int(stream.uniform(1)[0] * (hi - lo + 1))
        vocab, probs = (vocab_a, pa) if label == 0 else (vocab_b, pb)
        toks = tuple(vocab[_draw(probs, u)] for u in stream.uniform(length))
        comments.append(Comment(toks, f"syn-{m}"))
    provenance = {"source": f"synthetic:two_topic(n={n_comments},mix={mix},seed={seed})", "filters": []}
    return Corpus(tuple(comments), provenance), labels


def write_jsonl(corpus: Corpus, path) -> None:
    """Write ``corpus`` as raw JSON Lines (tokens joined by spaces)."""
    lines = [
        json.dumps({"id": c.source_id, "text": " ".join(c.tokens)}, ensure_ascii=False)
        for c in corpus
    ]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


_OPENERS_A = ("omg", "sooo", "luv", "aww")
_BODY_A = ("cute", "pretty", "gorgeous", "adorable", "perfect")
_TAILS_A = ("😍", "💕", "<3", ":)", "!!!", "xoxo", "😭", "^_^")
_OPENERS_B = ("nice", "great", "love the", "cool", "like the")
_BODY_B = ("jacket", "colors", "outfit", "shoes", "coat", "bag", "style", "look")
_TAILS_B = (".", "!", ", very clean", " here", ", well matched")


def demo_comments(n: int = 600, seed: int = 0) -> list[str]:
    """Raw comment strings in two registers, for the bundled CLI demo.

    About two thirds are effusive, emoji-heavy comments and the rest are
    plain remarks about clothing. A few over-long comments and one-off words
    are mixed in so the length cap and frequency threshold have work to do.
    """
    stream = Stream(seed)

    def pick(options):
        return options[int(stream.uniform(1)[0] * len(options))]

    texts = []
    for i in range(n):
        u = stream.uniform(1)[0]
        if u < 0.64:
            text = f"{pick(_OPENERS_A)} {pick(_BODY_A)} {pick(_TAILS_A)}"
            if stream.uniform(1)[0] < 0.4:
                text += pick(_TAILS_A)
        elif u < 0.97:
            text = f"{pick(_OPENERS_B)} {pick(_BODY_B)}{pick(_TAILS_B)}"
        else:
            # over-long rambling comment, removed by the length cap
            text = " ".join(pick(_BODY_B + _BODY_A) for _ in range(25))
        if stream.uniform(1)[0] < 0.03:
            text += f" #tag{i}"
        texts.append(text)
    return texts


@dataclass
class SyntheticBundle:
    """A style model and a base language model trained on different corpora.

    The style side is an A-dominant mix; the base LM is trained on a
    B-dominant mix with its own vocabulary, so the style-weight has to pull
    generation away from what the base model prefers. With ``base_mix=None``
    both models share the style corpus and its vocabulary.
    """

    style_corpus: Corpus
    base_corpus: Corpus
    model: object  # TopicModel
    lm: object  # NgramLM
    style: object  # StyleWeight aligned to the LM vocabulary
    a_topic: int


def synthetic_bundle(seed: int = 0, style_mix: float = 0.7, base_mix: float | None = 0.2,
                     n_comments: int = 200, lengths: tuple[int, int] = (2, 5),
                     iterations: int = 1000) -> SyntheticBundle:
    from .lm import LmConfig, train_lm
    from .style import align_to_vocab, compute_style_weight
    from .topic import TopicConfig, train_lda

    style_corpus, _ = two_topic_corpus(n_comments, style_mix, seed=seed, lengths=lengths)
    style_vocab = build_vocabulary(style_corpus, min_freq=1)
    model = train_lda(style_corpus, style_vocab, TopicConfig(K=2, iterations=iterations, burn_in=0, seed=seed))
    if base_mix is None:
        base_corpus, base_vocab = style_corpus, style_vocab
    else:
        base_corpus, _ = two_topic_corpus(n_comments, base_mix, seed=seed + 1000, lengths=lengths)
        base_vocab = build_vocabulary(base_corpus, min_freq=5)
    lm = train_lm(base_corpus, base_vocab, LmConfig(order=3, k=0.1, seed=seed))
    sw = align_to_vocab(compute_style_weight(model, model_id=f"synthetic-{seed}"), style_vocab, base_vocab)
    a_topic = 0 if len(set(model.top_words(0, 10)) & set(STYLE_A)) > 5 else 1
    return SyntheticBundle(style_corpus, base_corpus, model, lm, sw, a_topic)
