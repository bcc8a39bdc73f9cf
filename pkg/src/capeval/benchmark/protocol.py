"""Pairwise evaluation protocol: reference exclusion, gold labels, accuracy.

A metric decides each pair by scoring both sides against reference sets
derived from the pair category; its decisions are then compared with the
majority human judgment. Ties in metric scores count as incorrect, and
pairs whose A/B votes balance out are excluded entirely.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .data import AudioEntry, CaptionPair, Judgment

CHOICE_A = "A"
CHOICE_B = "B"
CHOICE_NOT_SURE = "NotSure"
GOLD_EXCLUDED = "Excluded"
DECISION_UNDECIDED = "Undecided"

CATEGORY_ORDER = ("HC", "HI", "HM", "MM")


class ProtocolError(Exception):
    pass


def gold_from_judgments(judgments: list[Judgment]) -> str:
    """Majority of A/B votes ignoring NotSure; balanced or empty votes exclude the pair."""
    if not judgments:
        raise ValueError("at least one judgment required")
    a = sum(1 for j in judgments if j.choice == CHOICE_A)
    b = sum(1 for j in judgments if j.choice == CHOICE_B)
    if a > b:
        return CHOICE_A
    if b > a:
        return CHOICE_B
    return GOLD_EXCLUDED


@dataclass(frozen=True)
class EvalReferences:
    """Reference sets each side is scored against (k sets for MM, 1 otherwise)."""

    side_a: tuple
    side_b: tuple


def _remove_text(references: tuple, text: str, pair_id: str) -> list[str]:
    if text not in references:
        raise ProtocolError(
            f"pair {pair_id!r}: caption {text!r} not found among the references"
        )
    out = list(references)
    out.remove(text)
    return out


def eval_references(pair: CaptionPair, entry: AudioEntry) -> EvalReferences:
    """Apply the reference-exclusion protocol for this pair's category.

    HC: each side is scored against the references minus its own text.
    HI/HM: both sides share the references minus the pair's human-correct
    caption. MM: both sides share all leave-one-out reference subsets.
    """
    refs = tuple(entry.references)
    if len(refs) < 3:
        raise ProtocolError(
            f"audio {entry.audio_id!r} has {len(refs)} references; the protocol needs >= 3"
        )
    if pair.audio_id != entry.audio_id:
        raise ProtocolError(f"pair {pair.pair_id!r} does not belong to audio {entry.audio_id!r}")

    if pair.category == "HC":
        side_a = _remove_text(refs, pair.caption_a.text, pair.pair_id)
        side_b = _remove_text(refs, pair.caption_b.text, pair.pair_id)
        return EvalReferences((tuple(side_a),), (tuple(side_b),))

    if pair.category in ("HI", "HM"):
        correct = _human_correct_caption(pair)
        shared = tuple(_remove_text(refs, correct.text, pair.pair_id))
        return EvalReferences((shared,), (shared,))

    # MM: all leave-one-out subsets, shared by both sides
    subsets = tuple(
        tuple(r for j, r in enumerate(refs) if j != i) for i in range(len(refs))
    )
    return EvalReferences(subsets, subsets)


def _human_correct_caption(pair: CaptionPair):
    if pair.category == "HM":
        return pair.caption_a if pair.caption_a.is_human else pair.caption_b
    # HI: the human caption whose source audio matches the pair's audio
    for cap in (pair.caption_a, pair.caption_b):
        if cap.source_audio_id == pair.audio_id:
            return cap
    raise ProtocolError(f"HI pair {pair.pair_id!r} has no caption from its own audio")


def metric_pair_decision(metric, pair: CaptionPair, entry: AudioEntry) -> str:
    """Score both sides (averaging over MM subsets); strictly higher wins.

    ``metric`` is a callable (candidate_text, references) -> float. An exact
    score tie is reported as Undecided.
    """
    er = eval_references(pair, entry)
    score_a = sum(metric(pair.caption_a.text, list(rs)) for rs in er.side_a) / len(er.side_a)
    score_b = sum(metric(pair.caption_b.text, list(rs)) for rs in er.side_b) / len(er.side_b)
    if score_a > score_b:
        return CHOICE_A
    if score_b > score_a:
        return CHOICE_B
    return DECISION_UNDECIDED


@dataclass
class CategoryResult:
    correct: int = 0
    included: int = 0

    @property
    def accuracy(self) -> float | None:
        """Accuracy in percent over included pairs, or None with nothing included."""
        if self.included == 0:
            return None
        return 100.0 * self.correct / self.included


@dataclass
class MetricReport:
    metric_name: str
    per_category: dict = field(default_factory=dict)  # category -> CategoryResult
    total: CategoryResult = field(default_factory=CategoryResult)
    excluded: int = 0
    undecided: int = 0
    decisions: dict = field(default_factory=dict)  # pair_id -> decision or gold marker

    def to_dict(self) -> dict:
        return {
            "metric": self.metric_name,
            "categories": {
                cat: {
                    "correct": res.correct,
                    "included": res.included,
                    "accuracy": res.accuracy,
                }
                for cat, res in sorted(self.per_category.items())
            },
            "total": {
                "correct": self.total.correct,
                "included": self.total.included,
                "accuracy": self.total.accuracy,
            },
            "excluded_pairs": self.excluded,
            "undecided_pairs": self.undecided,
        }


def benchmark_metric(
    metric,
    pairs: list[CaptionPair],
    judgments: list[Judgment],
    dataset: list[AudioEntry],
    metric_name: str = "metric",
) -> MetricReport:
    """Per-category and micro-average accuracy of one metric against gold.

    Pairs whose judgments balance out are excluded; metric ties count as
    incorrect decisions.
    """
    if not pairs:
        raise ValueError("no pairs to benchmark")
    entries = {e.audio_id: e for e in dataset}
    by_pair: dict[str, list[Judgment]] = {}
    for j in judgments:
        by_pair.setdefault(j.pair_id, []).append(j)

    report = MetricReport(metric_name=metric_name)
    for cat in CATEGORY_ORDER:
        report.per_category[cat] = CategoryResult()
    for pair in sorted(pairs, key=lambda p: p.pair_id):
        pair_judgments = by_pair.get(pair.pair_id, [])
        gold = gold_from_judgments(pair_judgments) if pair_judgments else GOLD_EXCLUDED
        if gold == GOLD_EXCLUDED:
            report.excluded += 1
            report.decisions[pair.pair_id] = GOLD_EXCLUDED
            continue
        entry = entries.get(pair.audio_id)
        if entry is None:
            raise ProtocolError(f"pair {pair.pair_id!r} references unknown audio {pair.audio_id!r}")
        decision = metric_pair_decision(metric, pair, entry)
        if decision == DECISION_UNDECIDED:
            report.undecided += 1
        result = report.per_category.setdefault(pair.category, CategoryResult())
        result.included += 1
        report.total.included += 1
        if decision == gold:
            result.correct += 1
            report.total.correct += 1
        report.decisions[pair.pair_id] = decision
    return report
