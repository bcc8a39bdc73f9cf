"""Hashed sparse surface features for the fluency-error classifier."""

from __future__ import annotations

import hashlib
from collections import Counter

from ..textproc import tokenize
from .corruption import _ADVERBIAL_TOKENS, _SINGLE_CONNECTORS

FEATURE_DIM = 1 << 16
_HASH_KEY = b"caption-features-v1"

# Tokens that make a caption look unfinished when they end it.
_DANGLING_TAIL = frozenset(_SINGLE_CONNECTORS) | {
    "a", "an", "the", "by", "with", "of", "to", "followed",
}


def _h(name: str) -> int:
    digest = hashlib.blake2b(name.encode(), digest_size=8, key=_HASH_KEY).digest()
    return int.from_bytes(digest, "big") % FEATURE_DIM


def extract_features(caption: str) -> dict[int, float]:
    """Sparse {hashed index: value} features of one caption.

    Unigram and bigram counts, last-token and last-bigram indicators, a
    dangling-ending flag, repeated-bigram and repeated-adverbial flags, and
    a coarse length bucket.
    """
    tokens = tokenize(caption)
    feats: Counter = Counter()
    for t in tokens:
        feats[_h("u=" + t)] += 1.0
    bigrams = list(zip(tokens, tokens[1:]))
    for a, b in bigrams:
        feats[_h(f"b={a}_{b}")] += 1.0
    if tokens:
        feats[_h("last=" + tokens[-1])] += 1.0
        if tokens[-1] in _DANGLING_TAIL:
            feats[_h("ends_dangling")] = 1.0
    if bigrams:
        feats[_h(f"lastb={bigrams[-1][0]}_{bigrams[-1][1]}")] += 1.0
        if max(Counter(bigrams).values()) >= 2:
            feats[_h("repeated_bigram")] = 1.0
    for phrase in _ADVERBIAL_TOKENS:
        n = len(phrase)
        hits = sum(1 for i in range(len(tokens) - n + 1) if tuple(tokens[i : i + n]) == phrase)
        if hits >= 2:
            feats[_h("repeated_adverbial")] = 1.0
            break
    feats[_h(f"len_bucket={min(len(tokens) // 4, 5)}")] = 1.0
    return dict(sorted(feats.items()))
