"""Style fusion of next-token distributions and beam-search generation."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._io import VocabularyMismatch
from .corpus import EOS, Vocabulary, detokenize
from .lm import NgramLM
from .style import StyleWeight


@dataclass(frozen=True)
class FusionConfig:
    """``strength`` is the exponent on the style-weight; 1.0 is a plain
    element-wise product, 0.0 switches style off. Other values are an
    extension."""

    strength: float = 1.0
    epsilon: float = 1e-12

    def __post_init__(self):
        if self.strength < 0:
            raise ValueError("fusion strength must be >= 0")
        if self.epsilon < 0:
            raise ValueError("epsilon must be >= 0")


@dataclass(frozen=True)
class BeamConfig:
    width: int = 3
    max_len: int = 20
    length_normalize: bool = False  # not part of the original method; off by default
    seed: int = 0  # reserved for sampling modes; beam search is deterministic
    allow_unk: bool = False

    def __post_init__(self):
        if self.width < 1:
            raise ValueError("beam width must be >= 1")
        if self.max_len < 1:
            raise ValueError("max_len must be >= 1")


@dataclass(frozen=True)
class Hypothesis:
    tokens: tuple[int, ...]  # ends with EOS when finished
    log_score: float
    finished: bool

    def __len__(self) -> int:
        return len(self.tokens)


def _weights(sw):
    if sw is None:
        return None
    return sw.w if isinstance(sw, StyleWeight) else np.asarray(sw, dtype=np.float64)


def fuse(base, sw, cfg: FusionConfig = FusionConfig()) -> np.ndarray:
    """p[i] proportional to base[i] * sw[i] ** strength, floored and renormalized."""
    base = np.asarray(base, dtype=np.float64)
    w = _weights(sw)
    if w is not None and w.shape != base.shape:
        raise ValueError(f"dimension mismatch: base has {base.shape[0]} entries, style {w.shape[0]}")
    # a constant weight cancels in the renormalization; skip it to stay bit-identical
    if w is None or cfg.strength == 0 or np.all(w == w[0]):
        p = base.copy()
    elif cfg.strength == 1:
        p = base * w
    else:
        p = base * w ** cfg.strength
    p = np.maximum(p, cfg.epsilon)
    return p / p.sum()


def _check_style(lm: NgramLM, sw):
    if isinstance(sw, StyleWeight) and sw.vocab_fingerprint != lm.vocab_fingerprint:
        raise VocabularyMismatch("style-weight is not aligned to the language model vocabulary")


def beam_search(lm: NgramLM, sw=None, bcfg: BeamConfig = BeamConfig(),
                fcfg: FusionConfig = FusionConfig()) -> list[Hypothesis]:
    """Beam search from BOS over the fused distribution.

    Each step expands every live hypothesis over the whole vocabulary and keeps
    the global top ``width`` candidates; those ending in EOS move to the
    finished pool. Hypotheses still live after ``max_len`` steps are returned
    unfinished. Score ties are broken by the lexicographically smaller token-id
    sequence.
    """
    _check_style(lm, sw)
    vocab = lm.vocab
    banned = [vocab.bos_id] + ([] if bcfg.allow_unk else [vocab.unk_id])
    n = len(vocab)
    live: list[tuple[tuple[int, ...], float]] = [((), 0.0)]
    pool: list[Hypothesis] = []
    for _ in range(bcfg.max_len):
        live.sort(key=lambda h: h[0])
        rows = []
        for ids, score in live:
            with np.errstate(divide="ignore"):
                logp = np.log(fuse(lm.next_token_dist(ids), sw, fcfg))
            logp[banned] = -np.inf
            rows.append(score + logp)
        flat = np.concatenate(rows)
        parent = np.repeat(np.arange(len(live)), n)
        token = np.tile(np.arange(n), len(live))
        order = np.lexsort((token, parent, -flat))
        survivors = []
        for idx in order[: bcfg.width]:
            if not np.isfinite(flat[idx]):
                break
            ids = live[parent[idx]][0] + (int(token[idx]),)
            if token[idx] == vocab.eos_id:
                pool.append(Hypothesis(ids, float(flat[idx]), True))
            else:
                survivors.append((ids, float(flat[idx])))
        live = survivors
        if not live:
            break
    pool.extend(Hypothesis(ids, score, False) for ids, score in live)

    def rank(h: Hypothesis):
        score = h.log_score / len(h.tokens) if bcfg.length_normalize else h.log_score
        return (-score, h.tokens)

    return sorted(pool, key=rank)[: bcfg.width]


def hypothesis_tokens(h: Hypothesis, vocab: Vocabulary) -> list[str]:
    return [t for t in vocab.decode(h.tokens) if t != EOS]


@dataclass(frozen=True)
class Bundle:
    vocab: Vocabulary
    lm: NgramLM
    style: StyleWeight | None = None


def generate(bundle: Bundle, bcfg: BeamConfig = BeamConfig(), fcfg: FusionConfig = FusionConfig(),
             n: int = 1) -> list[str]:
    """Top ``n`` beam outputs as space-joined token strings (fewer if the beam has fewer)."""
    if bundle.lm.vocab_fingerprint != bundle.vocab.fingerprint:
        raise VocabularyMismatch("language model and vocabulary fingerprints differ")
    if bundle.style is not None and bundle.style.vocab_fingerprint != bundle.vocab.fingerprint:
        raise VocabularyMismatch("style-weight and vocabulary fingerprints differ")
    hyps = beam_search(bundle.lm, bundle.style, bcfg, fcfg)
    return [detokenize(hypothesis_tokens(h, bundle.vocab)) for h in hyps[:n]]
