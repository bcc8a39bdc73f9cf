"""Rule-based corruption of clean captions into fluency-error variants.

Five error families are supported; each rule edits the token sequence and
the resulting labels record exactly the rules that were applied. The phrase
inventories below are explicit stand-ins chosen to cover the documented
examples of each error family.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from enum import Enum

from ..textproc import stem, tokenize

# Phrases that leave a sentence dangling when appended.
DANGLING_PHRASES = ("and", "and a", "and the", "followed by", "with a", "as a")

# Clause connectors, used both for clause splitting and for deletion.
CONNECTORS = ("and", "while", "as", "then", "followed by", "before", "after")

# Adverbial phrases eligible for the repeated-adverb rule.
ADVERBIALS = (
    "nearby",
    "loudly",
    "quietly",
    "softly",
    "repeatedly",
    "continuously",
    "several times",
    "in the background",
    "in the distance",
    "outside",
)

# Always-present verb stems; the corpus-derived lexicon extends these.
VERB_SEEDS = ("play", "speak", "blow", "sizzle", "bark", "ring", "hum", "crackle")


class ErrorType(Enum):
    INCOMPLETE_SENTENCE = "IncompleteSentence"
    REPEATED_EVENT = "RepeatedEvent"
    REPEATED_ADVERB = "RepeatedAdverb"
    MISSING_CONJUNCTION = "MissingConjunction"
    MISSING_VERB = "MissingVerb"


# Deletions run before appends so a dangling tail stays at the end and an
# appended connector can never be the one that gets deleted.
_APPLY_ORDER = (
    ErrorType.MISSING_CONJUNCTION,
    ErrorType.MISSING_VERB,
    ErrorType.REPEATED_ADVERB,
    ErrorType.REPEATED_EVENT,
    ErrorType.INCOMPLETE_SENTENCE,
)


class InapplicableRuleError(Exception):
    """The requested corruption rule cannot apply to this caption."""


@dataclass(frozen=True)
class ErrorLabelSet:
    """Per-type error flags plus the overall flag (true iff any type is set)."""

    per_type: frozenset
    overall_error: bool

    def __post_init__(self):
        if self.overall_error != bool(self.per_type):
            raise ValueError("overall_error must equal (per_type nonempty)")

    @classmethod
    def clean(cls) -> "ErrorLabelSet":
        return cls(frozenset(), False)

    @classmethod
    def of(cls, types) -> "ErrorLabelSet":
        ts = frozenset(types)
        return cls(ts, bool(ts))


_MULTIWORD_CONNECTORS = sorted(
    (tuple(c.split()) for c in CONNECTORS if " " in c), key=len, reverse=True
)
_SINGLE_CONNECTORS = frozenset(c for c in CONNECTORS if " " not in c)
_ADVERBIAL_TOKENS = sorted((tuple(a.split()) for a in ADVERBIALS), key=len, reverse=True)


def _connector_spans(tokens: list[str]) -> list[tuple[int, int]]:
    """(start, length) spans of connector occurrences, left to right."""
    spans = []
    i = 0
    while i < len(tokens):
        hit = None
        for phrase in _MULTIWORD_CONNECTORS:
            if tuple(tokens[i : i + len(phrase)]) == phrase:
                hit = (i, len(phrase))
                break
        if hit is None and tokens[i] in _SINGLE_CONNECTORS:
            hit = (i, 1)
        if hit:
            spans.append(hit)
            i += hit[1]
        else:
            i += 1
    return spans


def _adverbial_at(tokens: list[str], i: int) -> tuple[str, ...] | None:
    for phrase in _ADVERBIAL_TOKENS:
        if tuple(tokens[i : i + len(phrase)]) == phrase:
            return phrase
    return None


def _first_adverbial(tokens: list[str]) -> tuple[str, ...] | None:
    for i in range(len(tokens)):
        phrase = _adverbial_at(tokens, i)
        if phrase:
            return phrase
    return None


def _clauses(tokens: list[str]) -> list[list[str]]:
    spans = _connector_spans(tokens)
    clauses = []
    start = 0
    for begin, length in spans:
        clauses.append(tokens[start:begin])
        start = begin + length
    clauses.append(tokens[start:])
    return [c for c in clauses if c]


class Corruptor:
    """Applies corruption rules; the verb lexicon is derived from a clean corpus.

    The lexicon holds stems: the seed stems plus the stem of every corpus
    token ending in "s" or "ing" whose stem also occurs bare in the corpus.
    """

    def __init__(self, clean_corpus=()):
        vocabulary = set()
        for caption in clean_corpus:
            vocabulary.update(tokenize(caption))
        self.verb_stems = {stem(v) for v in VERB_SEEDS}
        for token in vocabulary:
            if token.endswith(("s", "ing")) and stem(token) in vocabulary:
                self.verb_stems.add(stem(token))

    # -- applicability ---------------------------------------------------

    def applicable_types(self, caption: str) -> list[ErrorType]:
        tokens = tokenize(caption)
        if len(tokens) < 3:
            return []
        out = [ErrorType.INCOMPLETE_SENTENCE, ErrorType.REPEATED_EVENT]
        if _first_adverbial(tokens):
            out.append(ErrorType.REPEATED_ADVERB)
        if _connector_spans(tokens):
            out.append(ErrorType.MISSING_CONJUNCTION)
        if any(stem(t) in self.verb_stems for t in tokens):
            out.append(ErrorType.MISSING_VERB)
        return sorted(out, key=lambda t: t.value)

    # -- rules -----------------------------------------------------------

    def _incomplete_sentence(self, tokens: list[str], rng: random.Random) -> list[str]:
        return tokens + rng.choice(DANGLING_PHRASES).split()

    def _repeated_event(self, tokens: list[str], rng: random.Random) -> list[str]:
        clauses = _clauses(tokens)
        if not clauses:
            raise InapplicableRuleError("no clause to repeat")
        clause = rng.choice(clauses)
        connector = rng.choice(CONNECTORS).split()
        return tokens + connector + clause

    def _repeated_adverb(self, tokens: list[str], rng: random.Random) -> list[str]:
        phrase = _first_adverbial(tokens)
        if phrase is None:
            raise InapplicableRuleError("no adverbial present")
        return tokens + list(phrase)

    def _missing_conjunction(self, tokens: list[str], rng: random.Random) -> list[str]:
        spans = _connector_spans(tokens)
        if not spans:
            raise InapplicableRuleError("no connector present")
        begin, length = rng.choice(spans)
        return tokens[:begin] + tokens[begin + length :]

    def _missing_verb(self, tokens: list[str], rng: random.Random) -> list[str]:
        eligible = [i for i, t in enumerate(tokens) if stem(t) in self.verb_stems]
        if not eligible:
            raise InapplicableRuleError("no verb-lexicon token present")
        i = rng.choice(eligible)
        return tokens[:i] + tokens[i + 1 :]

    def corrupt(self, caption: str, types, rng: random.Random) -> tuple[str, ErrorLabelSet]:
        """Apply the requested error types to the caption.

        Raises InapplicableRuleError when a rule finds nothing to act on;
        callers retry with a different type combination.
        """
        tokens = tokenize(caption)
        if len(tokens) < 3:
            raise InapplicableRuleError("caption shorter than 3 tokens")
        requested = set(types)
        if not requested:
            raise ValueError("at least one error type required")
        rules = {
            ErrorType.INCOMPLETE_SENTENCE: self._incomplete_sentence,
            ErrorType.REPEATED_EVENT: self._repeated_event,
            ErrorType.REPEATED_ADVERB: self._repeated_adverb,
            ErrorType.MISSING_CONJUNCTION: self._missing_conjunction,
            ErrorType.MISSING_VERB: self._missing_verb,
        }
        for etype in _APPLY_ORDER:
            if etype in requested:
                tokens = rules[etype](tokens, rng)
        return " ".join(tokens), ErrorLabelSet.of(requested)


@dataclass
class SyntheticDataset:
    """Labeled records plus the count of captions no rule could corrupt."""

    records: list = field(default_factory=list)  # (text, ErrorLabelSet) pairs
    skipped: int = 0


def build_synthetic_dataset(clean: list[str], seed: int) -> SyntheticDataset:
    """Clean captions plus one corrupted copy each: 1 error type 90% of the
    time, 2 distinct types otherwise, shuffled deterministically by seed."""
    if not clean:
        raise ValueError("clean corpus is empty")
    rng = random.Random(seed)
    corruptor = Corruptor(clean)
    records = []
    skipped = 0
    for caption in clean:
        records.append((caption, ErrorLabelSet.clean()))
        applicable = corruptor.applicable_types(caption)
        if not applicable:
            skipped += 1
            continue
        k = 1 if rng.random() < 0.9 else 2
        k = min(k, len(applicable))
        corrupted = None
        for _ in range(20):
            chosen = rng.sample(applicable, k)
            try:
                corrupted = corruptor.corrupt(caption, chosen, rng)
                break
            except InapplicableRuleError:
                continue
        if corrupted is None:
            # the append-only rules can never fail; force a combination of them
            fallback = [ErrorType.INCOMPLETE_SENTENCE, ErrorType.REPEATED_EVENT][:k]
            corrupted = corruptor.corrupt(caption, fallback, rng)
        records.append(corrupted)
    rng.shuffle(records)
    return SyntheticDataset(records=records, skipped=skipped)


def save_dataset_file(records, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for text, labels in records:
            fh.write(
                json.dumps(
                    {
                        "text": text,
                        "types": sorted(t.value for t in labels.per_type),
                        "error": labels.overall_error,
                    },
                    sort_keys=True,
                )
                + "\n"
            )


def load_dataset_file(path) -> list:
    records = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
                types = frozenset(ErrorType(t) for t in obj["types"])
                labels = ErrorLabelSet(types, bool(obj["error"]))
                records.append((obj["text"], labels))
            except (json.JSONDecodeError, KeyError, ValueError) as exc:
                raise ValueError(f"{path}:{line_no}: bad dataset record: {exc}") from exc
    return records
