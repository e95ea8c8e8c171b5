"""Diversity and accuracy measures for a generated corpus against references.

Both KL measures use natural logarithms and add-one smoothing over a shared
domain: the union of observed words for WF-KL, the full tag set for POS-KL.
"""
from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import asdict, dataclass, field

from ._io import StylecastError
from .corpus import Corpus
from .pos import TAGSET, TAGGER_ID, TaggedSentence, tag_corpus


def _token_lists(corpus) -> list[tuple[str, ...]]:
    if isinstance(corpus, Corpus):
        return corpus.token_lists()
    return [tuple(toks) for toks in corpus]


def smoothed(counts: Counter, domain) -> list[float]:
    """(count + 1) / sum(count + 1) over ``domain``."""
    total = sum(counts.get(item, 0) + 1 for item in domain)
    return [(counts.get(item, 0) + 1) / total for item in domain]


def kl_divergence(p, q) -> float:
    """KL(p || q) for strictly positive distributions on the same domain.

    Summed as sum(p log(p/q) - p + q): every term is nonnegative, so rounding
    can never push the result below zero.
    """
    if len(p) != len(q):
        raise ValueError("distributions have different lengths")
    terms = []
    for pi, qi in zip(p, q):
        if pi == qi:
            continue
        terms.append(pi * math.log(pi / qi) - pi + qi)
    return max(0.0, math.fsum(terms))


def dic_rate(reference, generated) -> float:
    ref_unique = {t for toks in _token_lists(reference) for t in toks}
    if not ref_unique:
        raise StylecastError("reference corpus has no tokens")
    gen_unique = {t for toks in _token_lists(generated) for t in toks}
    return len(gen_unique) / len(ref_unique)


def _word_counts(corpus) -> Counter:
    counts = Counter()
    for toks in _token_lists(corpus):
        counts.update(toks)
    return counts


def wf_kl(reference, generated) -> float:
    ref, gen = _word_counts(reference), _word_counts(generated)
    if not ref or not gen:
        raise StylecastError("WF-KL needs two non-empty corpora")
    domain = sorted(set(ref) | set(gen))
    return kl_divergence(smoothed(ref, domain), smoothed(gen, domain))


def _tag_counts(sentences) -> Counter:
    counts = Counter()
    for s in sentences:
        if not isinstance(s, TaggedSentence):
            raise StylecastError("POS-KL expects tagged sentences")
        for t in s.tags:
            if not 0 <= t < len(TAGSET):
                raise StylecastError(f"tag id {t} is outside the tag set")
            counts[t] += 1
    return counts


def pos_kl(reference, generated) -> float:
    ref, gen = _tag_counts(reference), _tag_counts(generated)
    if not ref or not gen:
        raise StylecastError("POS-KL needs two non-empty tagged corpora")
    domain = range(len(TAGSET))
    return kl_divergence(smoothed(ref, domain), smoothed(gen, domain))


def _ngrams(tokens, n) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def bleu_statistics(generated, references, max_n: int = 4):
    """Clipped n-gram matches, candidate n-gram totals, and the two lengths."""
    hyps = _token_lists(generated)
    refs = [[tuple(r) for r in rs] for rs in references]
    if not hyps or len(hyps) != len(refs):
        raise StylecastError("BLEU needs one non-empty reference list per generated comment")
    matches = [0] * max_n
    totals = [0] * max_n
    hyp_len = ref_len = 0
    for hyp, rs in zip(hyps, refs):
        if not rs:
            raise StylecastError("every generated comment needs at least one reference")
        hyp_len += len(hyp)
        # closest reference length; the shorter one on ties
        ref_len += min((abs(len(r) - len(hyp)), len(r)) for r in rs)[1]
        for n in range(1, max_n + 1):
            cand = _ngrams(hyp, n)
            best = Counter()
            for r in rs:
                best |= _ngrams(r, n)
            matches[n - 1] += sum(min(c, best[g]) for g, c in cand.items())
            totals[n - 1] += sum(cand.values())
    return matches, totals, hyp_len, ref_len


def bleu_precisions(generated, references, max_n: int = 4) -> list[float]:
    matches, totals, _, _ = bleu_statistics(generated, references, max_n)
    # an order with no candidate n-grams at all is vacuous, not a miss
    return [m / t if t else 1.0 for m, t in zip(matches, totals)]


def _bleu(matches, totals, hyp_len, ref_len) -> float:
    precisions = [m / t if t else 1.0 for m, t in zip(matches, totals)]
    if hyp_len == 0 or min(precisions) == 0:
        return 0.0
    bp = 1.0 if hyp_len > ref_len else math.exp(1 - ref_len / hyp_len)
    return bp * math.exp(math.fsum(math.log(p) for p in precisions) / 4)


def bleu4(generated, references) -> float:
    """Corpus BLEU with uniform 1-4-gram weights, clipping and brevity penalty."""
    return _bleu(*bleu_statistics(generated, references, 4))


def bleu4_pooled(generated, reference_pool) -> float:
    """BLEU-4 where each generated comment's references are the whole pool.

    Equivalent to ``bleu4`` with the pool repeated per comment, but the
    clipping table is built once.
    """
    hyps = _token_lists(generated)
    pool = _token_lists(reference_pool)
    if not hyps or not pool:
        raise StylecastError("BLEU needs non-empty generated and reference corpora")
    best = [{} for _ in range(4)]
    for r in pool:
        for n in range(1, 5):
            table = best[n - 1]
            for g, c in _ngrams(r, n).items():
                if c > table.get(g, 0):
                    table[g] = c
    lengths = sorted({len(r) for r in pool})
    matches, totals = [0] * 4, [0] * 4
    hyp_len = ref_len = 0
    for hyp in hyps:
        hyp_len += len(hyp)
        ref_len += min((abs(L - len(hyp)), L) for L in lengths)[1]
        for n in range(1, 5):
            cand = _ngrams(hyp, n)
            matches[n - 1] += sum(min(c, best[n - 1].get(g, 0)) for g, c in cand.items())
            totals[n - 1] += sum(cand.values())
    return _bleu(matches, totals, hyp_len, ref_len)


@dataclass
class DiversityReport:
    dic_rate: float
    wf_kl: float
    pos_kl: float
    bleu4: float
    N_t: int
    N_g: int
    word_domain: int
    tag_domain: int
    provenance: dict = field(default_factory=dict)

    def to_json(self) -> str:
        doc = {"format_version": 1, "kind": "diversity_report"}
        doc.update(asdict(self))
        return json.dumps(doc, ensure_ascii=False, indent=1) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "DiversityReport":
        doc = json.loads(text)
        doc.pop("format_version", None)
        doc.pop("kind", None)
        return cls(**doc)


def report(reference, generated, ref_tags=None, gen_tags=None, references=None,
           provenance: dict | None = None) -> DiversityReport:
    """All four measures for one (reference, generated) pair.

    Tags default to the built-in tagger. ``references`` gives per-comment
    reference lists for BLEU; without it each generated comment is scored
    against the whole reference corpus.
    """
    ref_lists = _token_lists(reference)
    gen_lists = _token_lists(generated)
    given = (ref_tags is not None) + (gen_tags is not None)
    tagger = {0: TAGGER_ID, 1: f"mixed:{TAGGER_ID}+external", 2: "external"}[given]
    if ref_tags is None:
        ref_tags = tag_corpus(ref_lists)
    if gen_tags is None:
        gen_tags = tag_corpus(gen_lists)
    if references is None:
        bleu = bleu4_pooled(gen_lists, ref_lists)
        pairing = "pooled"
    else:
        bleu = bleu4(gen_lists, references)
        pairing = "per-comment"
    ref_unique = {t for toks in ref_lists for t in toks}
    gen_unique = {t for toks in gen_lists for t in toks}
    prov = {
        "tagger": tagger,
        "bleu_references": pairing,
        "log_base": "e",
        "meteor": "not computed",
    }
    prov.update(provenance or {})
    return DiversityReport(
        dic_rate=dic_rate(ref_lists, gen_lists),
        wf_kl=wf_kl(ref_lists, gen_lists),
        pos_kl=pos_kl(ref_tags, gen_tags),
        bleu4=bleu,
        N_t=len(ref_unique),
        N_g=len(gen_unique),
        word_domain=len(ref_unique | gen_unique),
        tag_domain=len(TAGSET),
        provenance=prov,
    )
