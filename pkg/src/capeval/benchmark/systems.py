"""Win fractions: how often each captioning system beats another on MM pairs."""

from __future__ import annotations

from dataclasses import dataclass, field

from .data import CaptionPair
from .protocol import CHOICE_A, CHOICE_B


@dataclass
class WinFractionReport:
    fractions: dict = field(default_factory=dict)  # system -> wins / decided
    wins: dict = field(default_factory=dict)
    decided: dict = field(default_factory=dict)
    omitted: list = field(default_factory=list)  # systems with zero decided pairs
    same_system_pairs: int = 0  # dropped: no cross-system signal

    def to_dict(self) -> dict:
        return {
            "fractions": dict(sorted(self.fractions.items())),
            "wins": dict(sorted(self.wins.items())),
            "decided": dict(sorted(self.decided.items())),
            "omitted": sorted(self.omitted),
            "same_system_pairs": self.same_system_pairs,
        }


def win_fractions(mm_pairs: list[CaptionPair], decisions: dict) -> WinFractionReport:
    """Per-system fraction of decided MM pairs it won.

    ``decisions`` maps pair_id to "A", "B", or any other marker (undecided
    and excluded pairs are dropped). Pairs whose two sides come from the
    same system carry no cross-system signal and are dropped with a counter;
    systems that never appear in a decided pair are listed as omitted.
    """
    report = WinFractionReport()
    seen = set()
    for pair in mm_pairs:
        if pair.category != "MM":
            raise ValueError(f"pair {pair.pair_id!r} is {pair.category}, not MM")
        sys_a, sys_b = pair.caption_a.source, pair.caption_b.source
        seen.update((sys_a, sys_b))
        if sys_a == sys_b:
            report.same_system_pairs += 1
            continue
        decision = decisions.get(pair.pair_id)
        if decision not in (CHOICE_A, CHOICE_B):
            continue
        winner = sys_a if decision == CHOICE_A else sys_b
        for system in (sys_a, sys_b):
            report.decided[system] = report.decided.get(system, 0) + 1
        report.wins[winner] = report.wins.get(winner, 0) + 1
    for system in sorted(seen):
        if report.decided.get(system, 0) == 0:
            report.omitted.append(system)
        else:
            report.fractions[system] = report.wins.get(system, 0) / report.decided[system]
    return report
