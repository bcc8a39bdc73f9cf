"""Sentence-level BLEU, ROUGE-L, METEOR (exact + stem tiers), and CIDEr-D.

Each scorer rates one tokenized candidate against one or more tokenized
references. CIDEr-D additionally needs corpus document frequencies, carried
by :class:`CiderCorpusStats` so the same statistics can score many
candidates.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

from .textproc import lcs_length, ngrams, stem

# Inclusive value ranges per metric family, used as a construction sanity check.
_RANGES = {
    "bleu_1": (0.0, 1.0),
    "bleu_4": (0.0, 1.0),
    "rouge_l": (0.0, 1.0),
    "meteor": (0.0, 1.0),
    "cider_d": (0.0, 10.0),
    "sbert": (-1.0, 1.0),
    "fense": (-1.0, 1.0),
}

BLEU_PRECISION_FLOOR = 1e-9
ROUGE_BETA = 1.2
METEOR_ALPHA = 0.9
METEOR_BETA = 3.0
METEOR_GAMMA = 0.5
CIDER_MAX_N = 4
CIDER_SIGMA = 6.0


@dataclass(frozen=True)
class MetricScore:
    metric_name: str
    value: float

    def __post_init__(self):
        lo, hi = _RANGES.get(self.metric_name, (-math.inf, math.inf))
        if not (lo <= self.value <= hi):
            raise ValueError(
                f"{self.metric_name} value {self.value} outside [{lo}, {hi}]"
            )


def bleu(candidate: list[str], references: list[list[str]], max_n: int) -> MetricScore:
    """Sentence-level BLEU with reference-clipped modified n-gram precision.

    The brevity penalty uses the reference length closest to the candidate
    (ties broken toward the shorter reference). Zero precisions are floored
    at 1e-9 before the log; levels for which the candidate has no n-grams at
    all contribute a vacuous precision of 1, which makes an identical
    candidate score exactly 1.0 at any length.
    """
    if max_n not in (1, 4):
        raise ValueError(f"max_n must be 1 or 4, got {max_n}")
    name = f"bleu_{max_n}"
    if not references:
        raise ValueError("bleu needs at least one reference")
    if not candidate:
        return MetricScore(name, 0.0)

    c = len(candidate)
    r = min((abs(len(ref) - c), len(ref)) for ref in references)[1]
    log_sum = 0.0
    for n in range(1, max_n + 1):
        cand_counts = ngrams(candidate, n)
        total = sum(cand_counts.values())
        if total == 0:
            continue
        max_ref_counts: Counter = Counter()
        for ref in references:
            for gram, count in ngrams(ref, n).items():
                if count > max_ref_counts[gram]:
                    max_ref_counts[gram] = count
        clipped = sum(min(count, max_ref_counts[gram]) for gram, count in cand_counts.items())
        p_n = clipped / total
        log_sum += math.log(max(p_n, BLEU_PRECISION_FLOOR)) / max_n
    bp = 1.0 if c > r else math.exp(1.0 - r / c)
    return MetricScore(name, bp * math.exp(log_sum))


def rouge_l(candidate: list[str], references: list[list[str]]) -> MetricScore:
    """ROUGE-L F-measure (beta = 1.2), maximum over the references."""
    if not references:
        raise ValueError("rouge_l needs at least one reference")
    beta_sq = ROUGE_BETA ** 2
    best = 0.0
    for ref in references:
        if not candidate or not ref:
            continue
        lcs = lcs_length(candidate, ref)
        if lcs == 0:
            continue
        p = lcs / len(candidate)
        r = lcs / len(ref)
        f = (1 + beta_sq) * p * r / (r + beta_sq * p)
        best = max(best, f)
    return MetricScore("rouge_l", best)


def _align(candidate: list[str], reference: list[str]) -> list[tuple[int, int]]:
    """Greedy one-to-one unigram alignment: exact matches first, stems second."""
    matched_to = [-1] * len(candidate)
    ref_used = [False] * len(reference)
    for ci, tok in enumerate(candidate):
        for ri, rtok in enumerate(reference):
            if not ref_used[ri] and rtok == tok:
                matched_to[ci] = ri
                ref_used[ri] = True
                break
    cand_stems = [stem(t) for t in candidate]
    ref_stems = [stem(t) for t in reference]
    for ci in range(len(candidate)):
        if matched_to[ci] >= 0:
            continue
        for ri in range(len(reference)):
            if not ref_used[ri] and ref_stems[ri] == cand_stems[ci]:
                matched_to[ci] = ri
                ref_used[ri] = True
                break
    return [(ci, ri) for ci, ri in enumerate(matched_to) if ri >= 0]


def meteor(candidate: list[str], references: list[list[str]]) -> MetricScore:
    """Unigram F-mean with a fragmentation penalty, maximum over references.

    Alignment is greedy and one-to-one with an exact tier before the stem
    tier; chunks are maximal runs of matches that are contiguous and in
    order on both sides.
    """
    if not references:
        raise ValueError("meteor needs at least one reference")
    best = 0.0
    for ref in references:
        if not candidate or not ref:
            continue
        pairs = _align(candidate, ref)
        m = len(pairs)
        if m == 0:
            continue
        chunks = 0
        prev = None
        for ci, ri in pairs:
            if prev is None or ci != prev[0] + 1 or ri != prev[1] + 1:
                chunks += 1
            prev = (ci, ri)
        p = m / len(candidate)
        r = m / len(ref)
        f_mean = p * r / (METEOR_ALPHA * p + (1 - METEOR_ALPHA) * r)
        penalty = METEOR_GAMMA * (chunks / m) ** METEOR_BETA
        best = max(best, f_mean * (1 - penalty))
    return MetricScore("meteor", best)


def _count_all_ngrams(seq: list[str], max_n: int) -> list[Counter]:
    return [ngrams(seq, n) for n in range(1, max_n + 1)]


@dataclass(frozen=True)
class CiderCorpusStats:
    """Document frequencies over a corpus of reference sets, for n = 1..4.

    ``doc_freq[n-1][gram]`` is the number of corpus items whose reference
    set contains ``gram`` at least once.
    """

    num_items: int
    doc_freq: tuple

    @classmethod
    def from_reference_sets(cls, reference_sets: list[list[list[str]]]) -> "CiderCorpusStats":
        doc_freq = tuple(Counter() for _ in range(CIDER_MAX_N))
        for refs in reference_sets:
            seen = [set() for _ in range(CIDER_MAX_N)]
            for ref in refs:
                for i in range(CIDER_MAX_N):
                    seen[i].update(ngrams(ref, i + 1))
            for i in range(CIDER_MAX_N):
                for gram in seen[i]:
                    doc_freq[i][gram] += 1
        return cls(num_items=len(reference_sets), doc_freq=doc_freq)

    def idf(self, n: int, gram: tuple) -> float:
        # unseen n-grams are treated as appearing in a single document
        return math.log(self.num_items) - math.log(max(1.0, self.doc_freq[n - 1][gram]))


def _tfidf_vectors(counts: list[Counter], stats: CiderCorpusStats) -> tuple[list[dict], list[float]]:
    vecs = []
    norms = []
    for i, level in enumerate(counts):
        vec = {g: c * stats.idf(i + 1, g) for g, c in level.items()}
        vecs.append(vec)
        norms.append(math.sqrt(sum(v * v for v in vec.values())))
    return vecs, norms


def cider_d_single(
    candidate: list[str],
    references: list[list[str]],
    stats: CiderCorpusStats,
    sigma: float = CIDER_SIGMA,
) -> float:
    """CIDEr-D score of one candidate given precomputed corpus statistics."""
    if not references:
        raise ValueError("cider_d needs at least one reference")
    cand_counts = _count_all_ngrams(candidate, CIDER_MAX_N)
    cand_vecs, cand_norms = _tfidf_vectors(cand_counts, stats)
    acc = [0.0] * CIDER_MAX_N
    for ref in references:
        ref_vecs, ref_norms = _tfidf_vectors(_count_all_ngrams(ref, CIDER_MAX_N), stats)
        delta = float(len(candidate) - len(ref))
        length_pen = math.exp(-(delta ** 2) / (2 * sigma ** 2))
        for i in range(CIDER_MAX_N):
            dot = 0.0
            for gram, val in cand_vecs[i].items():
                rv = ref_vecs[i].get(gram, 0.0)
                dot += min(val, rv) * rv
            if cand_norms[i] != 0.0 and ref_norms[i] != 0.0:
                acc[i] += length_pen * dot / (cand_norms[i] * ref_norms[i])
    per_n = [a / len(references) for a in acc]
    return 10.0 * sum(per_n) / CIDER_MAX_N


def cider_d(items: list[tuple[list[str], list[list[str]]]]) -> list[MetricScore]:
    """CIDEr-D over a corpus of (candidate, references) items.

    Document frequencies come from the items' own reference sets, so at
    least two items are required for the IDF term to be meaningful.
    """
    if len(items) < 2:
        raise ValueError("cider_d needs at least 2 items to form document frequencies")
    for _, refs in items:
        if not refs:
            raise ValueError("cider_d items need at least one reference each")
    stats = CiderCorpusStats.from_reference_sets([refs for _, refs in items])
    return [
        MetricScore("cider_d", cider_d_single(cand, refs, stats))
        for cand, refs in items
    ]
