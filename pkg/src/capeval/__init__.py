"""Audio caption evaluation toolkit.

N-gram metrics (BLEU, ROUGE-L, METEOR, CIDEr-D), embedding-based
similarity, a fluency-error detector with a score penalty, and a pairwise
human-judgment benchmark with its annotation service.
"""

from .benchmark import (
    AudioEntry,
    Caption,
    CaptionPair,
    Judgment,
    benchmark_metric,
    eval_references,
    fleiss_kappa,
    generate_pairs,
    gold_from_judgments,
    metric_pair_decision,
    win_fractions,
)
from .detector import (
    Corruptor,
    DetectorConfig,
    DetectorModel,
    ErrorLabelSet,
    ErrorType,
    TrainConfig,
    build_synthetic_dataset,
    evaluate_detector,
    extract_features,
    predict_error_prob,
    train_detector,
)
from .embedding import (
    EmbeddingProvider,
    FileEmbeddingProvider,
    HashedStemEmbedder,
    HttpEmbeddingProvider,
    cosine,
    sbert_score,
)
from .fense import fense_score, penalize, penalized_metric
from .ngram_metrics import CiderCorpusStats, MetricScore, bleu, cider_d, meteor, rouge_l
from .textproc import lcs_length, ngrams, stem, tokenize

__version__ = "0.1.0"

__all__ = [
    "AudioEntry",
    "Caption",
    "CaptionPair",
    "Judgment",
    "benchmark_metric",
    "eval_references",
    "fleiss_kappa",
    "generate_pairs",
    "gold_from_judgments",
    "metric_pair_decision",
    "win_fractions",
    "Corruptor",
    "DetectorConfig",
    "DetectorModel",
    "ErrorLabelSet",
    "ErrorType",
    "TrainConfig",
    "build_synthetic_dataset",
    "evaluate_detector",
    "extract_features",
    "predict_error_prob",
    "train_detector",
    "EmbeddingProvider",
    "FileEmbeddingProvider",
    "HashedStemEmbedder",
    "HttpEmbeddingProvider",
    "cosine",
    "sbert_score",
    "fense_score",
    "penalize",
    "penalized_metric",
    "CiderCorpusStats",
    "MetricScore",
    "bleu",
    "cider_d",
    "meteor",
    "rouge_l",
    "lcs_length",
    "ngrams",
    "stem",
    "tokenize",
    "__version__",
]
