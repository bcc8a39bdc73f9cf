from .agreement import KappaResult, fleiss_kappa
from .data import (
    HUMAN_SOURCE,
    AudioEntry,
    Caption,
    CaptionPair,
    Judgment,
    ParseError,
    load_dataset,
    load_judgments,
    load_machine_captions,
    load_pairs,
    save_judgments,
    save_pairs,
)
from .pairs import PairGeneration, generate_pairs
from .protocol import (
    CHOICE_A,
    CHOICE_B,
    CHOICE_NOT_SURE,
    DECISION_UNDECIDED,
    GOLD_EXCLUDED,
    EvalReferences,
    MetricReport,
    ProtocolError,
    benchmark_metric,
    eval_references,
    gold_from_judgments,
    metric_pair_decision,
)
from .systems import WinFractionReport, win_fractions

__all__ = [
    "KappaResult",
    "fleiss_kappa",
    "HUMAN_SOURCE",
    "AudioEntry",
    "Caption",
    "CaptionPair",
    "Judgment",
    "ParseError",
    "load_dataset",
    "load_judgments",
    "load_machine_captions",
    "load_pairs",
    "save_judgments",
    "save_pairs",
    "PairGeneration",
    "generate_pairs",
    "CHOICE_A",
    "CHOICE_B",
    "CHOICE_NOT_SURE",
    "DECISION_UNDECIDED",
    "GOLD_EXCLUDED",
    "EvalReferences",
    "MetricReport",
    "ProtocolError",
    "benchmark_metric",
    "eval_references",
    "gold_from_judgments",
    "metric_pair_decision",
    "WinFractionReport",
    "win_fractions",
]
