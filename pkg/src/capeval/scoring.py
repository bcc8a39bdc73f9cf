"""Builds string-in, float-out metric callables for the CLI and benchmark.

N-gram metrics tokenize internally; the embedding-based ones cache vectors
per text so repeated reference sets stay cheap. CIDEr-D needs corpus
document frequencies, supplied as :class:`CiderCorpusStats` at build time.
"""

from __future__ import annotations

import numpy as np

from . import ngram_metrics
from .detector.model import OVERALL, DetectorConfig, DetectorModel, predict_error_prob
from .embedding import EmbeddingProvider, cosine
from .fense import penalize
from .ngram_metrics import CiderCorpusStats
from .textproc import tokenize

METRIC_NAMES = ("bleu_1", "bleu_4", "rouge_l", "meteor", "cider_d", "sbert", "fense")

# CLI spellings accepted on --metrics
_ALIASES = {
    "bleu1": "bleu_1",
    "bleu4": "bleu_4",
    "rougel": "rouge_l",
    "rouge_l": "rouge_l",
    "ciderd": "cider_d",
}


def canonical_metric_name(name: str) -> str:
    key = name.strip().lower()
    key = _ALIASES.get(key, key)
    if key not in METRIC_NAMES:
        raise ValueError(f"unknown metric {name!r} (expected one of {', '.join(METRIC_NAMES)})")
    return key


class _EmbeddingCache:
    def __init__(self, provider: EmbeddingProvider):
        self._provider = provider
        self._cache: dict[str, np.ndarray] = {}

    def get(self, texts: list[str]) -> list[np.ndarray]:
        missing = sorted({t for t in texts if t not in self._cache})
        if missing:
            for text, vec in zip(missing, self._provider.embed_batch(missing)):
                self._cache[text] = vec
        return [self._cache[t] for t in texts]


def _sbert_fn(cache: _EmbeddingCache):
    def score(candidate: str, references: list[str]) -> float:
        vecs = cache.get([candidate] + list(references))
        cand = vecs[0]
        return sum(cosine(cand, v) for v in vecs[1:]) / len(references)

    return score


def build_metrics(
    names,
    provider: EmbeddingProvider | None = None,
    model: DetectorModel | None = None,
    config: DetectorConfig = DetectorConfig(),
    cider_stats: CiderCorpusStats | None = None,
) -> dict:
    """Map canonical metric names to (candidate, references) -> float callables.

    Raises ValueError when a requested metric is missing its dependency
    (provider for sbert/fense, model for fense, corpus stats for cider_d).
    """
    wanted = [canonical_metric_name(n) for n in names]
    fns = {}
    cache = _EmbeddingCache(provider) if provider is not None else None
    for name in wanted:
        if name == "bleu_1":
            fns[name] = lambda c, refs: ngram_metrics.bleu(
                tokenize(c), [tokenize(r) for r in refs], 1
            ).value
        elif name == "bleu_4":
            fns[name] = lambda c, refs: ngram_metrics.bleu(
                tokenize(c), [tokenize(r) for r in refs], 4
            ).value
        elif name == "rouge_l":
            fns[name] = lambda c, refs: ngram_metrics.rouge_l(
                tokenize(c), [tokenize(r) for r in refs]
            ).value
        elif name == "meteor":
            fns[name] = lambda c, refs: ngram_metrics.meteor(
                tokenize(c), [tokenize(r) for r in refs]
            ).value
        elif name == "cider_d":
            if cider_stats is None:
                raise ValueError("cider_d needs corpus statistics")
            stats = cider_stats
            fns[name] = lambda c, refs, _s=stats: ngram_metrics.cider_d_single(
                tokenize(c), [tokenize(r) for r in refs], _s
            )
        elif name == "sbert":
            if cache is None:
                raise ValueError("sbert needs an embedding provider")
            fns[name] = _sbert_fn(cache)
        elif name == "fense":
            if cache is None:
                raise ValueError("fense needs an embedding provider")
            if model is None:
                raise ValueError("fense needs a trained detector model")
            base = _sbert_fn(cache)

            def fense_fn(c: str, refs: list[str], _base=base, _m=model, _cfg=config) -> float:
                p_error = predict_error_prob(_m, c)[OVERALL]
                return penalize(_base(c, refs), p_error, _cfg)

            fns[name] = fense_fn
    return fns


def cider_stats_from_items(items) -> CiderCorpusStats:
    """Corpus statistics from (candidate_text, reference_texts) scoring items."""
    if len(items) < 2:
        raise ValueError("cider_d needs at least 2 items to form document frequencies")
    return CiderCorpusStats.from_reference_sets(
        [[tokenize(r) for r in refs] for _, refs in items]
    )


def cider_stats_from_dataset(dataset) -> CiderCorpusStats:
    """Corpus statistics from the reference sets of a benchmark dataset."""
    return CiderCorpusStats.from_reference_sets(
        [[tokenize(r) for r in entry.references] for entry in dataset]
    )
