"""Fluency-penalized scoring: divide a metric by 10 when the detector fires.

The canonical combined score is the penalized averaged-cosine similarity;
:func:`penalized_metric` wraps any non-negative base metric with the same
gate.
"""

from __future__ import annotations

from .detector.model import OVERALL, DetectorConfig, DetectorModel, predict_error_prob
from .embedding import EmbeddingProvider, sbert_score
from .ngram_metrics import MetricScore


def penalize(score: float, p_error: float, config: DetectorConfig = DetectorConfig()) -> float:
    """Divide the score by the penalty factor when p_error exceeds the threshold.

    The comparison is strict, so p_error exactly at the threshold leaves the
    score untouched. Negative scores are rejected: dividing them would raise
    rather than lower them.
    """
    if score < 0:
        raise ValueError(f"penalty undefined for negative score {score}")
    if p_error > config.threshold:
        return score / config.penalty_factor
    return score


def fense_score(
    candidate: str,
    references: list[str],
    provider: EmbeddingProvider,
    model: DetectorModel,
    config: DetectorConfig = DetectorConfig(),
) -> MetricScore:
    """Penalized mean embedding similarity of the candidate with its references."""
    base = sbert_score(candidate, references, provider).value
    p_error = predict_error_prob(model, candidate)[OVERALL]
    return MetricScore("fense", penalize(base, p_error, config))


def penalized_metric(base, model: DetectorModel, config: DetectorConfig = DetectorConfig()):
    """Wrap a base metric with the candidate-side fluency penalty.

    ``base`` is a callable (candidate, references) -> float or MetricScore,
    taking the candidate either as raw text or as a token list. Only the
    candidate is checked; references are presumed fluent. The returned
    callable yields plain floats.
    """

    def scored(candidate, references) -> float:
        raw = base(candidate, references)
        value = raw.value if isinstance(raw, MetricScore) else float(raw)
        text = candidate if isinstance(candidate, str) else " ".join(candidate)
        p_error = predict_error_prob(model, text)[OVERALL]
        return penalize(value, p_error, config)

    return scored
