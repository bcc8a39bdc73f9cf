"""Seeded construction of HC / HI / HM / MM caption pairs for annotation.

Per audio entry: one HC pair (two of its references), one HI pair (one
reference plus a reference of another random audio), one HM pair, and one
to four MM pairs. MM candidates whose embedding similarity exceeds 0.9 are
filtered out; when nothing survives, the lowest-similarity candidate is
kept and flagged as a fallback.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from ..embedding import EmbeddingProvider, cosine
from .data import HUMAN_SOURCE, AudioEntry, Caption, CaptionPair

MM_SIMILARITY_CUTOFF = 0.9
MAX_MM_PAIRS = 4


@dataclass
class PairGeneration:
    pairs: list = field(default_factory=list)
    skipped: list = field(default_factory=list)  # (audio_id, reason)
    fallback_count: int = 0
    provider_name: str = ""


def _human(entry: AudioEntry, text: str) -> Caption:
    return Caption(text=text, source=HUMAN_SOURCE, source_audio_id=entry.audio_id)


def _maybe_swap(a: Caption, b: Caption, rng: random.Random) -> tuple[Caption, Caption]:
    return (b, a) if rng.random() < 0.5 else (a, b)


def generate_pairs(
    dataset: list[AudioEntry],
    machine_captions: dict[str, list[Caption]],
    provider: EmbeddingProvider,
    seed: int,
) -> PairGeneration:
    """Build the four pair categories for every usable entry, deterministically."""
    rng = random.Random(seed)
    result = PairGeneration(provider_name=type(provider).__name__)

    # one batched embedding pass over every text the MM filter can touch
    texts = sorted({c.text for caps in machine_captions.values() for c in caps})
    vectors = dict(zip(texts, provider.embed_batch(texts))) if texts else {}

    for entry in dataset:
        machine = machine_captions.get(entry.audio_id, [])
        distinct_texts = {c.text for c in machine}
        if len(entry.references) < 2:
            result.skipped.append((entry.audio_id, "fewer than 2 references"))
            continue
        if len(distinct_texts) < 2:
            result.skipped.append((entry.audio_id, "fewer than 2 distinct machine captions"))
            continue

        # HC: two of this entry's references
        ref_a, ref_b = rng.sample(entry.references, 2)
        a, b = _maybe_swap(_human(entry, ref_a), _human(entry, ref_b), rng)
        result.pairs.append(
            CaptionPair(f"{entry.audio_id}:HC", entry.audio_id, a, b, "HC")
        )

        # HI: one reference plus a reference of a different audio
        others = [e for e in dataset if e.audio_id != entry.audio_id]
        if not others:
            result.skipped.append((entry.audio_id, "no other audio for the HI pair"))
        else:
            other = rng.choice(others)
            correct = _human(entry, rng.choice(entry.references))
            wrong_text = rng.choice(
                [r for r in other.references if r != correct.text] or list(other.references)
            )
            mismatched = Caption(
                text=wrong_text, source=HUMAN_SOURCE, source_audio_id=other.audio_id
            )
            if mismatched.text != correct.text:
                a, b = _maybe_swap(correct, mismatched, rng)
                result.pairs.append(
                    CaptionPair(f"{entry.audio_id}:HI", entry.audio_id, a, b, "HI")
                )
            else:
                result.skipped.append((entry.audio_id, "HI captions coincide"))

        # HM: one reference plus one machine caption
        href = _human(entry, rng.choice(entry.references))
        mcands = [c for c in machine if c.text != href.text]
        if mcands:
            a, b = _maybe_swap(href, rng.choice(mcands), rng)
            result.pairs.append(
                CaptionPair(f"{entry.audio_id}:HM", entry.audio_id, a, b, "HM")
            )
        else:
            result.skipped.append((entry.audio_id, "no machine caption distinct from the reference"))

        # MM: filtered machine-machine pairs
        candidates = [
            (ca, cb)
            for ca, cb in itertools.combinations(machine, 2)
            if ca.text != cb.text
        ]
        sims = [float(cosine(vectors[ca.text], vectors[cb.text])) for ca, cb in candidates]
        survivors = [
            (ca, cb, s)
            for (ca, cb), s in zip(candidates, sims)
            if s <= MM_SIMILARITY_CUTOFF
        ]
        if survivors:
            chosen = (
                rng.sample(survivors, MAX_MM_PAIRS)
                if len(survivors) > MAX_MM_PAIRS
                else survivors
            )
            fallback = False
        else:
            best = min(range(len(candidates)), key=lambda i: (sims[i], i))
            chosen = [(candidates[best][0], candidates[best][1], sims[best])]
            fallback = True
            result.fallback_count += 1
        for i, (ca, cb, sim) in enumerate(chosen):
            a, b = _maybe_swap(ca, cb, rng)
            result.pairs.append(
                CaptionPair(
                    f"{entry.audio_id}:MM{i}",
                    entry.audio_id,
                    a,
                    b,
                    "MM",
                    similarity=sim,
                    fallback=fallback,
                )
            )
    return result
