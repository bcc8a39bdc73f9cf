"""Fleiss kappa for a fixed number of categorical raters per item."""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass


@dataclass(frozen=True)
class KappaResult:
    value: float
    degenerate: bool = False  # every assignment fell in one category


def fleiss_kappa(items, raters_per_item: int) -> KappaResult:
    """Chance-corrected agreement kappa = (Pbar - Pe) / (1 - Pe).

    ``items`` holds one entry per subject: either a mapping category->count
    or a sequence of counts. Each entry must sum to ``raters_per_item``.
    When every assignment lands in a single category the expected agreement
    is 1 and kappa is reported as 1.0 with the degenerate flag set.
    """
    if raters_per_item < 2:
        raise ValueError(f"raters_per_item must be >= 2, got {raters_per_item}")
    if not items:
        raise ValueError("no items")

    if isinstance(items[0], Mapping):
        categories = sorted({c for item in items for c in item})
        matrix = [[int(item.get(c, 0)) for c in categories] for item in items]
    else:
        width = len(items[0])
        matrix = [list(map(int, item)) for item in items]
        if any(len(row) != width for row in matrix):
            raise ValueError("all items must cover the same categories")

    n = raters_per_item
    for i, row in enumerate(matrix):
        if sum(row) != n:
            raise ValueError(f"item {i} has {sum(row)} assignments, expected {n}")

    num_items = len(matrix)
    p_bar = sum(
        (sum(c * c for c in row) - n) / (n * (n - 1)) for row in matrix
    ) / num_items
    totals = [sum(row[j] for row in matrix) for j in range(len(matrix[0]))]
    grand = num_items * n
    p_e = sum((t / grand) ** 2 for t in totals)
    if p_e >= 1.0:
        return KappaResult(1.0, degenerate=True)
    return KappaResult((p_bar - p_e) / (1.0 - p_e))
