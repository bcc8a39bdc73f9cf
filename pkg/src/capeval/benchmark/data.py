"""Benchmark data types and their newline-delimited JSON file formats."""

from __future__ import annotations

import json
from dataclasses import dataclass

HUMAN_SOURCE = "human"
CATEGORIES = ("HC", "HI", "HM", "MM")


class ParseError(Exception):
    """Bad input file; carries the path and line number for diagnostics."""

    def __init__(self, path, line_no: int, message: str):
        super().__init__(f"{path}:{line_no}: {message}")
        self.path = path
        self.line_no = line_no


@dataclass(frozen=True)
class Caption:
    """One caption text with its provenance."""

    text: str
    source: str  # "human" or the machine system name
    source_audio_id: str | None = None
    decoding: str | None = None

    @property
    def is_human(self) -> bool:
        return self.source == HUMAN_SOURCE


@dataclass(frozen=True)
class AudioEntry:
    audio_id: str
    references: tuple
    audio_path: str | None = None

    def __post_init__(self):
        refs = tuple(self.references)
        object.__setattr__(self, "references", refs)
        if len(refs) < 2:
            raise ValueError(f"audio {self.audio_id!r} needs >= 2 references")
        if len(set(refs)) != len(refs):
            raise ValueError(f"audio {self.audio_id!r} has duplicate references")


@dataclass(frozen=True)
class CaptionPair:
    pair_id: str
    audio_id: str
    caption_a: Caption
    caption_b: Caption
    category: str
    similarity: float | None = None
    fallback: bool = False

    def __post_init__(self):
        if self.category not in CATEGORIES:
            raise ValueError(f"unknown pair category {self.category!r}")
        if self.caption_a.text == self.caption_b.text:
            raise ValueError(f"pair {self.pair_id!r} has identical captions")
        a_h, b_h = self.caption_a.is_human, self.caption_b.is_human
        if self.category in ("HC", "HI") and not (a_h and b_h):
            raise ValueError(f"{self.category} pair {self.pair_id!r} must be human-human")
        if self.category == "HM" and a_h == b_h:
            raise ValueError(f"HM pair {self.pair_id!r} must mix human and machine")
        if self.category == "MM" and (a_h or b_h):
            raise ValueError(f"MM pair {self.pair_id!r} must be machine-machine")
        if self.category == "HI":
            mismatched = [
                c for c in (self.caption_a, self.caption_b)
                if c.source_audio_id is not None and c.source_audio_id != self.audio_id
            ]
            if len(mismatched) != 1:
                raise ValueError(
                    f"HI pair {self.pair_id!r} needs exactly one caption from another audio"
                )


@dataclass(frozen=True)
class Judgment:
    pair_id: str
    rater_id: str
    choice: str  # "A", "B", or "NotSure"
    timestamp: float = 0.0

    def __post_init__(self):
        if self.choice not in ("A", "B", "NotSure"):
            raise ValueError(f"bad choice {self.choice!r}")


def _read_ndjson(path):
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                yield line_no, json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(path, line_no, f"invalid JSON: {exc}") from exc


def load_dataset(path) -> list[AudioEntry]:
    entries = []
    seen = set()
    for line_no, obj in _read_ndjson(path):
        try:
            entry = AudioEntry(
                audio_id=obj["audio_id"],
                references=tuple(obj["references"]),
                audio_path=obj.get("audio_path"),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(path, line_no, str(exc)) from exc
        if entry.audio_id in seen:
            raise ParseError(path, line_no, f"duplicate audio_id {entry.audio_id!r}")
        seen.add(entry.audio_id)
        entries.append(entry)
    return entries


def load_machine_captions(path) -> dict[str, list[Caption]]:
    captions: dict[str, list[Caption]] = {}
    for line_no, obj in _read_ndjson(path):
        try:
            cap = Caption(
                text=obj["text"],
                source=obj["system"],
                source_audio_id=obj["audio_id"],
                decoding=obj.get("decoding"),
            )
        except (KeyError, TypeError) as exc:
            raise ParseError(path, line_no, f"missing field: {exc}") from exc
        if cap.source == HUMAN_SOURCE:
            raise ParseError(path, line_no, 'machine caption system may not be "human"')
        captions.setdefault(obj["audio_id"], []).append(cap)
    return captions


def _caption_to_obj(cap: Caption) -> dict:
    obj = {"text": cap.text, "source": cap.source}
    if cap.source_audio_id is not None:
        obj["source_audio_id"] = cap.source_audio_id
    if cap.decoding is not None:
        obj["decoding"] = cap.decoding
    return obj


def _caption_from_obj(obj: dict) -> Caption:
    return Caption(
        text=obj["text"],
        source=obj["source"],
        source_audio_id=obj.get("source_audio_id"),
        decoding=obj.get("decoding"),
    )


def save_pairs(pairs, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for p in pairs:
            obj = {
                "pair_id": p.pair_id,
                "audio_id": p.audio_id,
                "category": p.category,
                "caption_a": _caption_to_obj(p.caption_a),
                "caption_b": _caption_to_obj(p.caption_b),
                "fallback": p.fallback,
            }
            if p.similarity is not None:
                obj["similarity"] = p.similarity
            fh.write(json.dumps(obj, sort_keys=True) + "\n")


def load_pairs(path) -> list[CaptionPair]:
    pairs = []
    seen = set()
    for line_no, obj in _read_ndjson(path):
        try:
            pair = CaptionPair(
                pair_id=obj["pair_id"],
                audio_id=obj["audio_id"],
                caption_a=_caption_from_obj(obj["caption_a"]),
                caption_b=_caption_from_obj(obj["caption_b"]),
                category=obj["category"],
                similarity=obj.get("similarity"),
                fallback=bool(obj.get("fallback", False)),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(path, line_no, str(exc)) from exc
        if pair.pair_id in seen:
            raise ParseError(path, line_no, f"duplicate pair_id {pair.pair_id!r}")
        seen.add(pair.pair_id)
        pairs.append(pair)
    return pairs


def save_judgments(judgments, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for j in judgments:
            fh.write(
                json.dumps(
                    {
                        "pair_id": j.pair_id,
                        "rater_id": j.rater_id,
                        "choice": j.choice,
                        "timestamp": j.timestamp,
                    },
                    sort_keys=True,
                )
                + "\n"
            )


def load_judgments(path) -> list[Judgment]:
    judgments = []
    seen = set()
    for line_no, obj in _read_ndjson(path):
        try:
            j = Judgment(
                pair_id=obj["pair_id"],
                rater_id=obj["rater_id"],
                choice=obj["choice"],
                timestamp=float(obj.get("timestamp", 0.0)),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(path, line_no, str(exc)) from exc
        key = (j.pair_id, j.rater_id)
        if key in seen:
            raise ParseError(path, line_no, f"duplicate judgment for {key}")
        seen.add(key)
        judgments.append(j)
    return judgments
