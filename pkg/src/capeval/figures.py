"""Matplotlib renderings of benchmark reports, written next to the data files."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .benchmark.protocol import CATEGORY_ORDER

_COLUMNS = list(CATEGORY_ORDER) + ["Total"]


def _accuracy_row(report) -> list[float]:
    row = []
    for cat in CATEGORY_ORDER:
        res = report.per_category.get(cat)
        row.append(res.accuracy if res is not None and res.accuracy is not None else 0.0)
    row.append(report.total.accuracy if report.total.accuracy is not None else 0.0)
    return row


def save_accuracy_figure(reports, path) -> None:
    """Grouped bar chart of per-category and total accuracy, one group per metric."""
    reports = list(reports)
    x = np.arange(len(_COLUMNS))
    width = 0.8 / max(1, len(reports))
    fig, ax = plt.subplots(figsize=(8, 4.5))
    for i, report in enumerate(reports):
        offset = (i - (len(reports) - 1) / 2) * width
        ax.bar(x + offset, _accuracy_row(report), width, label=report.metric_name)
    ax.set_xticks(x)
    ax.set_xticklabels(_COLUMNS)
    ax.set_ylabel("pairwise accuracy (%)")
    ax.set_ylim(0, 100)
    ax.legend(fontsize=8)
    ax.grid(axis="y", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_win_fraction_figure(win_reports: dict, path) -> None:
    """Bar chart of system win fractions, grouped by decision source (metric or gold)."""
    systems = sorted({s for rep in win_reports.values() for s in rep.fractions})
    if not systems:
        systems = ["(none)"]
    x = np.arange(len(systems))
    width = 0.8 / max(1, len(win_reports))
    fig, ax = plt.subplots(figsize=(8, 4.5))
    for i, (label, rep) in enumerate(sorted(win_reports.items())):
        offset = (i - (len(win_reports) - 1) / 2) * width
        values = [rep.fractions.get(s, 0.0) for s in systems]
        ax.bar(x + offset, values, width, label=label)
    ax.set_xticks(x)
    ax.set_xticklabels(systems, rotation=20, ha="right")
    ax.set_ylabel("win fraction")
    ax.set_ylim(0, 1)
    ax.legend(fontsize=8)
    ax.grid(axis="y", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
