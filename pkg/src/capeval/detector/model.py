"""Multi-label logistic detector: one head per error type plus Overall.

Training is plain seeded SGD over the hashed features, which keeps runs
bit-reproducible and the serialized model a small versioned JSON file.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field

import numpy as np

from .corruption import ErrorType
from .features import FEATURE_DIM, extract_features

OVERALL = "Overall"
HEAD_NAMES = tuple(e.value for e in ErrorType) + (OVERALL,)

_FORMAT = "caption-error-detector"
_VERSION = 1
_FEATURE_SPACE = {"dim": FEATURE_DIM, "hasher": "blake2b/caption-features-v1"}


class TrainingError(Exception):
    pass


@dataclass(frozen=True)
class DetectorConfig:
    """Penalty gate: divide a score by penalty_factor when p(Error) > threshold."""

    threshold: float = 0.9
    penalty_factor: float = 10.0

    def __post_init__(self):
        if not 0.0 < self.threshold < 1.0:
            raise ValueError(f"threshold must be in (0, 1), got {self.threshold}")
        if self.penalty_factor <= 1.0:
            raise ValueError(f"penalty_factor must be > 1, got {self.penalty_factor}")


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 20
    learning_rate: float = 0.5
    l2: float = 1e-6
    seed: int = 0


@dataclass
class DetectorModel:
    weights: np.ndarray  # (num_heads, FEATURE_DIM)
    biases: np.ndarray  # (num_heads,)
    train_config: TrainConfig
    feature_space: dict = field(default_factory=lambda: dict(_FEATURE_SPACE))

    def predict_proba(self, caption: str) -> dict[str, float]:
        feats = extract_features(caption)
        idx = np.fromiter(feats.keys(), dtype=np.intp, count=len(feats))
        val = np.fromiter(feats.values(), dtype=np.float64, count=len(feats))
        z = self.weights[:, idx] @ val + self.biases
        probs = 1.0 / (1.0 + np.exp(-np.clip(z, -30.0, 30.0)))
        return {name: float(p) for name, p in zip(HEAD_NAMES, probs)}


def _label_matrix(records) -> np.ndarray:
    y = np.zeros((len(records), len(HEAD_NAMES)), dtype=np.float64)
    for i, (_, labels) in enumerate(records):
        for etype in labels.per_type:
            y[i, HEAD_NAMES.index(etype.value)] = 1.0
        if labels.overall_error:
            y[i, len(HEAD_NAMES) - 1] = 1.0
    return y


def train_detector(records, config: TrainConfig = TrainConfig()) -> DetectorModel:
    """Train the six logistic heads with seeded SGD; bit-identical per seed."""
    if not records:
        raise TrainingError("empty training set")
    y = _label_matrix(records)
    for h, name in enumerate(HEAD_NAMES):
        positives = y[:, h].sum()
        if positives == 0 or positives == len(records):
            raise TrainingError(f"head {name!r} has a single class in the training set")

    featurized = []
    for text, _ in records:
        feats = extract_features(text)
        featurized.append(
            (
                np.fromiter(feats.keys(), dtype=np.intp, count=len(feats)),
                np.fromiter(feats.values(), dtype=np.float64, count=len(feats)),
            )
        )

    w = np.zeros((len(HEAD_NAMES), FEATURE_DIM), dtype=np.float64)
    b = np.zeros(len(HEAD_NAMES), dtype=np.float64)
    rng = random.Random(config.seed)
    order = list(range(len(records)))
    lr = config.learning_rate
    for _ in range(config.epochs):
        rng.shuffle(order)
        for i in order:
            idx, val = featurized[i]
            z = w[:, idx] @ val + b
            p = 1.0 / (1.0 + np.exp(-np.clip(z, -30.0, 30.0)))
            g = p - y[i]
            w[:, idx] -= lr * (np.outer(g, val) + config.l2 * w[:, idx])
            b -= lr * g
    return DetectorModel(weights=w, biases=b, train_config=config)


def predict_error_prob(model: DetectorModel, caption: str) -> dict[str, float]:
    """Per-head probabilities for one caption, keyed by head name."""
    return model.predict_proba(caption)


@dataclass(frozen=True)
class HeadEvaluation:
    precision: float
    recall: float
    f1: float
    true_positives: int
    false_positives: int
    false_negatives: int
    no_positive_predictions: bool


def evaluate_detector(model: DetectorModel, labeled, threshold: float = 0.9) -> dict[str, HeadEvaluation]:
    """Precision/recall/F1 per head at the given probability threshold."""
    if not labeled:
        raise ValueError("labeled set is empty")
    y = _label_matrix(labeled)
    probs = np.array([list(model.predict_proba(text).values()) for text, _ in labeled])
    predicted = probs > threshold
    out = {}
    for h, name in enumerate(HEAD_NAMES):
        tp = int(np.sum(predicted[:, h] & (y[:, h] == 1.0)))
        fp = int(np.sum(predicted[:, h] & (y[:, h] == 0.0)))
        fn = int(np.sum(~predicted[:, h] & (y[:, h] == 1.0)))
        no_pos = (tp + fp) == 0
        precision = 0.0 if no_pos else tp / (tp + fp)
        recall = 0.0 if (tp + fn) == 0 else tp / (tp + fn)
        f1 = 0.0 if precision + recall == 0 else 2 * precision * recall / (precision + recall)
        out[name] = HeadEvaluation(precision, recall, f1, tp, fp, fn, no_pos)
    return out


def save_model(model: DetectorModel, path) -> None:
    heads = {}
    for h, name in enumerate(HEAD_NAMES):
        nz = np.nonzero(model.weights[h])[0]
        heads[name] = {
            "indices": [int(i) for i in nz],
            "values": [float(v) for v in model.weights[h, nz]],
            "bias": float(model.biases[h]),
        }
    payload = {
        "format": _FORMAT,
        "version": _VERSION,
        "feature_space": model.feature_space,
        "train_config": {
            "epochs": model.train_config.epochs,
            "learning_rate": model.train_config.learning_rate,
            "l2": model.train_config.l2,
            "seed": model.train_config.seed,
        },
        "heads": heads,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True)
        fh.write("\n")


def load_model(path) -> DetectorModel:
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    if payload.get("format") != _FORMAT:
        raise ValueError(f"{path}: not a detector model file")
    if payload.get("version") != _VERSION:
        raise ValueError(f"{path}: unsupported model version {payload.get('version')!r}")
    if payload.get("feature_space", {}).get("dim") != FEATURE_DIM:
        raise ValueError(f"{path}: feature space does not match this build")
    w = np.zeros((len(HEAD_NAMES), FEATURE_DIM), dtype=np.float64)
    b = np.zeros(len(HEAD_NAMES), dtype=np.float64)
    for h, name in enumerate(HEAD_NAMES):
        head = payload["heads"][name]
        w[h, head["indices"]] = head["values"]
        b[h] = head["bias"]
    tc = payload["train_config"]
    config = TrainConfig(
        epochs=int(tc["epochs"]),
        learning_rate=float(tc["learning_rate"]),
        l2=float(tc["l2"]),
        seed=int(tc["seed"]),
    )
    return DetectorModel(weights=w, biases=b, train_config=config,
                         feature_space=payload["feature_space"])
