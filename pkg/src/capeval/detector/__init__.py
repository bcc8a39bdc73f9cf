from .corruption import (
    ADVERBIALS,
    CONNECTORS,
    DANGLING_PHRASES,
    VERB_SEEDS,
    Corruptor,
    ErrorLabelSet,
    ErrorType,
    InapplicableRuleError,
    SyntheticDataset,
    build_synthetic_dataset,
    load_dataset_file,
    save_dataset_file,
)
from .features import FEATURE_DIM, extract_features
from .model import (
    OVERALL,
    DetectorConfig,
    DetectorModel,
    HeadEvaluation,
    TrainConfig,
    TrainingError,
    evaluate_detector,
    load_model,
    predict_error_prob,
    save_model,
    train_detector,
)

__all__ = [
    "ADVERBIALS",
    "CONNECTORS",
    "DANGLING_PHRASES",
    "VERB_SEEDS",
    "Corruptor",
    "ErrorLabelSet",
    "ErrorType",
    "InapplicableRuleError",
    "SyntheticDataset",
    "build_synthetic_dataset",
    "load_dataset_file",
    "save_dataset_file",
    "FEATURE_DIM",
    "extract_features",
    "OVERALL",
    "DetectorConfig",
    "DetectorModel",
    "HeadEvaluation",
    "TrainConfig",
    "TrainingError",
    "evaluate_detector",
    "load_model",
    "predict_error_prob",
    "save_model",
    "train_detector",
]
