"""HTTP service for collecting pairwise caption judgments.

State of record is an append-only newline-delimited JSON event log; the
whole service state is rebuilt by replaying it on startup, which makes
restarts lossless. Assignment issuance and judgment writes are serialized
through one lock, so raters polling concurrently see linearizable state.
"""

from __future__ import annotations

import json
import mimetypes
import os
import random
import threading
import time
from dataclasses import dataclass
from pathlib import Path

from fastapi import FastAPI, HTTPException, Query
from fastapi.responses import FileResponse, JSONResponse, PlainTextResponse, Response
from fastapi.staticfiles import StaticFiles

from .benchmark.agreement import fleiss_kappa
from .benchmark.data import CaptionPair

CHOICES = ("A", "B", "NotSure")


class UnknownRaterError(Exception):
    pass


class NoOpenAssignmentError(Exception):
    pass


class DuplicateSubmissionError(Exception):
    pass


class LateSubmissionError(Exception):
    """The pair collected its full quota from other raters first."""


@dataclass
class Assignment:
    pair_id: str
    rater_id: str
    flipped: bool
    issued_at: float
    completed: bool = False


def _flip_choice(choice: str) -> str:
    if choice == "A":
        return "B"
    if choice == "B":
        return "A"
    return choice


class AnnotationService:
    def __init__(
        self,
        pairs: list[CaptionPair],
        raters: list[str],
        data_dir,
        raters_per_pair: int = 4,
        audio_paths: dict | None = None,
        seed: int = 0,
    ):
        if raters_per_pair < 1:
            raise ValueError("raters_per_pair must be >= 1")
        self.pairs = {p.pair_id: p for p in pairs}
        if len(self.pairs) != len(pairs):
            raise ValueError("duplicate pair ids")
        self.raters = set(raters)
        self.raters_per_pair = raters_per_pair
        self.audio_paths = dict(audio_paths or {})
        self._rng = random.Random(seed)
        self._lock = threading.Lock()
        self._assignments: dict[tuple, Assignment] = {}
        self._completed: dict[str, int] = {p: 0 for p in self.pairs}
        self._judgments: list[dict] = []

        self._data_dir = Path(data_dir)
        self._data_dir.mkdir(parents=True, exist_ok=True)
        self._log_path = self._data_dir / "events.ndjson"
        self._replay()
        self._log = open(self._log_path, "a", encoding="utf-8")

    # -- persistence ------------------------------------------------------

    def _replay(self) -> None:
        if not self._log_path.exists():
            return
        with open(self._log_path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                event = json.loads(line)
                key = (event["pair_id"], event["rater_id"])
                if event["event"] == "assign":
                    self._assignments[key] = Assignment(
                        pair_id=event["pair_id"],
                        rater_id=event["rater_id"],
                        flipped=bool(event["flipped"]),
                        issued_at=float(event["issued_at"]),
                    )
                elif event["event"] == "judgment":
                    self._assignments[key].completed = True
                    self._completed[event["pair_id"]] += 1
                    self._judgments.append(event)

    def _append(self, event: dict) -> None:
        self._log.write(json.dumps(event, sort_keys=True) + "\n")
        self._log.flush()
        os.fsync(self._log.fileno())

    def close(self) -> None:
        self._log.close()

    # -- operations --------------------------------------------------------

    def _check_rater(self, rater_id: str) -> None:
        if rater_id not in self.raters:
            raise UnknownRaterError(rater_id)

    def next_pair(self, rater_id: str) -> dict | None:
        """Issue (or re-serve) an open pair for this rater, least-judged first."""
        with self._lock:
            self._check_rater(rater_id)
            for (pid, rid), a in self._assignments.items():
                if rid != rater_id or a.completed:
                    continue
                if self._completed[pid] < self.raters_per_pair:
                    return self._render(a)
                # the pair filled up while this assignment sat open; abandon
                # it so the rater is not stuck on a dead pair
                a.completed = True
            eligible = [
                pid
                for pid, count in self._completed.items()
                if count < self.raters_per_pair and (pid, rater_id) not in self._assignments
            ]
            if not eligible:
                return None
            pair_id = min(eligible, key=lambda pid: (self._completed[pid], pid))
            assignment = Assignment(
                pair_id=pair_id,
                rater_id=rater_id,
                flipped=self._rng.random() < 0.5,
                issued_at=time.time(),
            )
            self._assignments[(pair_id, rater_id)] = assignment
            self._append(
                {
                    "event": "assign",
                    "pair_id": pair_id,
                    "rater_id": rater_id,
                    "flipped": assignment.flipped,
                    "issued_at": assignment.issued_at,
                }
            )
            return self._render(assignment)

    def _render(self, assignment: Assignment) -> dict:
        pair = self.pairs[assignment.pair_id]
        first, second = pair.caption_a.text, pair.caption_b.text
        if assignment.flipped:
            first, second = second, first
        return {
            "pair_id": pair.pair_id,
            "audio_id": pair.audio_id,
            "audio_url": f"/api/audio/{pair.audio_id}",
            "caption_a": first,
            "caption_b": second,
        }

    def submit_judgment(self, pair_id: str, rater_id: str, choice: str) -> dict:
        """Record a display-side choice; stored canonically after un-flipping."""
        if choice not in CHOICES:
            raise ValueError(f"choice must be one of {CHOICES}, got {choice!r}")
        with self._lock:
            self._check_rater(rater_id)
            if pair_id not in self.pairs:
                raise KeyError(pair_id)
            assignment = self._assignments.get((pair_id, rater_id))
            if assignment is None:
                raise NoOpenAssignmentError(f"{rater_id} holds no assignment for {pair_id}")
            if assignment.completed:
                raise DuplicateSubmissionError(f"{rater_id} already judged {pair_id}")
            if self._completed[pair_id] >= self.raters_per_pair:
                assignment.completed = True  # abandoned; the rater moves on
                raise LateSubmissionError(f"{pair_id} already has its full quota of judgments")
            canonical = _flip_choice(choice) if assignment.flipped else choice
            event = {
                "event": "judgment",
                "pair_id": pair_id,
                "rater_id": rater_id,
                "display_choice": choice,
                "choice": canonical,
                "timestamp": time.time(),
            }
            self._append(event)
            assignment.completed = True
            self._completed[pair_id] += 1
            self._judgments.append(event)
            return {"pair_id": pair_id, "rater_id": rater_id, "choice": canonical}

    def stats(self) -> dict:
        with self._lock:
            complete = [pid for pid, c in self._completed.items() if c >= self.raters_per_pair]
            per_category: dict[str, dict] = {}
            for pair in self.pairs.values():
                bucket = per_category.setdefault(
                    pair.category, {"pairs": 0, "complete": 0, "judgments": 0}
                )
                bucket["pairs"] += 1
                bucket["judgments"] += self._completed[pair.pair_id]
                if self._completed[pair.pair_id] >= self.raters_per_pair:
                    bucket["complete"] += 1
            kappa = None
            degenerate = False
            if complete:
                counts = []
                for pid in sorted(complete):
                    votes = {"A": 0, "B": 0, "NotSure": 0}
                    for j in self._judgments:
                        if j["pair_id"] == pid:
                            votes[j["choice"]] += 1
                    counts.append(votes)
                result = fleiss_kappa(counts, self.raters_per_pair)
                kappa = result.value
                degenerate = result.degenerate
            return {
                "pairs_total": len(self.pairs),
                "pairs_complete": len(complete),
                "judgments": len(self._judgments),
                "fleiss_kappa": kappa,
                "kappa_degenerate": degenerate,
                "raters_per_pair": self.raters_per_pair,
                "per_category": dict(sorted(per_category.items())),
            }

    def export_judgments(self) -> list[dict]:
        """Canonical-side judgments, byte-stably ordered by (pair_id, rater_id)."""
        with self._lock:
            records = [
                {
                    "pair_id": j["pair_id"],
                    "rater_id": j["rater_id"],
                    "choice": j["choice"],
                    "timestamp": j["timestamp"],
                }
                for j in self._judgments
            ]
        return sorted(records, key=lambda r: (r["pair_id"], r["rater_id"]))


def create_app(service: AnnotationService, ui_dir=None) -> FastAPI:
    app = FastAPI(title="caption pair annotation")

    @app.get("/api/pairs/next")
    def next_pair(rater: str = Query(...)):
        try:
            payload = service.next_pair(rater)
        except UnknownRaterError:
            raise HTTPException(status_code=404, detail=f"unknown rater {rater!r}")
        if payload is None:
            return Response(status_code=204)
        return payload

    @app.post("/api/judgments")
    def submit(judgment: dict):
        try:
            pair_id = judgment["pair_id"]
            rater_id = judgment["rater_id"]
            choice = judgment["choice"]
        except (KeyError, TypeError):
            raise HTTPException(status_code=422, detail="pair_id, rater_id, choice required")
        try:
            return service.submit_judgment(pair_id, rater_id, choice)
        except UnknownRaterError:
            raise HTTPException(status_code=404, detail=f"unknown rater {rater_id!r}")
        except KeyError:
            raise HTTPException(status_code=404, detail=f"unknown pair {pair_id!r}")
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        except DuplicateSubmissionError as exc:
            raise HTTPException(status_code=409, detail=f"duplicate: {exc}")
        except NoOpenAssignmentError as exc:
            raise HTTPException(status_code=409, detail=f"no open assignment: {exc}")
        except LateSubmissionError as exc:
            raise HTTPException(status_code=410, detail=f"pair complete: {exc}")

    @app.get("/api/stats")
    def stats():
        return service.stats()

    @app.get("/api/export")
    def export():
        body = "".join(json.dumps(r, sort_keys=True) + "\n" for r in service.export_judgments())
        return PlainTextResponse(body, media_type="application/x-ndjson")

    @app.get("/api/audio/{audio_id}")
    def audio(audio_id: str):
        path = service.audio_paths.get(audio_id)
        if not path or not Path(path).exists():
            raise HTTPException(status_code=404, detail=f"no audio for {audio_id!r}")
        media_type = mimetypes.guess_type(path)[0] or "application/octet-stream"
        return FileResponse(path, media_type=media_type)

    if ui_dir is not None:
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    @app.exception_handler(Exception)
    def unhandled(request, exc):
        return JSONResponse(status_code=500, content={"detail": str(exc)})

    return app
