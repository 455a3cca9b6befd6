"""Accuracy aggregation and the grouped report layout.

The trailing Average is a micro-average: 100 * total correct / total
questions, equivalently the count-weighted mean of the cell accuracies.
Rendering groups subjects by difficulty (Hard: NJE, PAE, CPA; Normal:
UNGEE; Easy: PFE, LBK) with S/M sub-columns and prints percentages to two
decimals, half-up.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from ..errors import DoubleCount
from ..textnorm import format_half_up
from .items import SUBJECT_LEVEL

SUBJECT_ORDER = ("NJE", "PAE", "CPA", "UNGEE", "PFE", "LBK")
LEVEL_ORDER = ("Hard", "Normal", "Easy")


@dataclass(frozen=True)
class ItemResult:
    item_id: str
    subject: str
    answer_type: str
    correct: bool
    errored: bool = False


@dataclass(frozen=True)
class Cell:
    correct: int
    total: int

    @property
    def accuracy(self) -> float:
        return 100.0 * self.correct / self.total


@dataclass
class AccuracyReport:
    cells: dict[tuple[str, str], Cell] = field(default_factory=dict)
    n_items: int = 0
    n_errors: int = 0

    @property
    def micro_average(self) -> float:
        correct = sum(c.correct for c in self.cells.values())
        total = sum(c.total for c in self.cells.values())
        return 100.0 * correct / total if total else 0.0

    def level_rollups(self) -> dict[str, Cell]:
        buckets: dict[str, list[Cell]] = {}
        for (subject, _), cell in self.cells.items():
            buckets.setdefault(SUBJECT_LEVEL[subject], []).append(cell)
        return {
            level: Cell(
                correct=sum(c.correct for c in cells),
                total=sum(c.total for c in cells),
            )
            for level, cells in buckets.items()
        }

    def ordered_cells(self) -> list[tuple[str, str, Cell]]:
        out = []
        for subject in SUBJECT_ORDER:
            for answer_type in ("single", "multi"):
                cell = self.cells.get((subject, answer_type))
                if cell is not None:
                    out.append((subject, answer_type, cell))
        return out

    def to_summary(self) -> dict:
        return {
            "cells": [
                {
                    "subject": subject,
                    "level": SUBJECT_LEVEL[subject],
                    "answer_type": answer_type,
                    "correct": cell.correct,
                    "total": cell.total,
                    "accuracy": round(cell.accuracy, 6),
                }
                for subject, answer_type, cell in self.ordered_cells()
            ],
            "levels": {
                level: {"correct": c.correct, "total": c.total, "accuracy": round(c.accuracy, 6)}
                for level, c in sorted(
                    self.level_rollups().items(), key=lambda kv: LEVEL_ORDER.index(kv[0])
                )
            },
            "micro_average": round(self.micro_average, 6),
            "n_items": self.n_items,
            "n_errors": self.n_errors,
        }


def aggregate(results: Sequence[ItemResult]) -> AccuracyReport:
    """Fold per-item results into cells; every item counted exactly once."""
    seen: set[str] = set()
    counts: dict[tuple[str, str], list[int]] = {}
    n_errors = 0
    for result in results:
        if result.item_id in seen:
            raise DoubleCount(f"item {result.item_id!r} scored twice")
        seen.add(result.item_id)
        key = (result.subject, result.answer_type)
        bucket = counts.setdefault(key, [0, 0])
        bucket[0] += int(result.correct)
        bucket[1] += 1
        n_errors += int(result.errored)
    report = AccuracyReport(
        cells={key: Cell(correct=c, total=t) for key, (c, t) in counts.items()},
        n_items=len(results),
        n_errors=n_errors,
    )
    return report


def micro_average(cells: Iterable[tuple[float, int]]) -> float:
    """Count-weighted mean of (accuracy %, question count) cells — the
    semantics of the report's Average column."""
    cells = list(cells)
    total = sum(n for _, n in cells)
    if total == 0:
        return 0.0
    return sum(accuracy * n for accuracy, n in cells) / total


def render_report(report: AccuracyReport, model_name: str = "model") -> str:
    """Grouped table: level header, subject header, S/M columns, Average."""
    ordered = report.ordered_cells()
    columns = [(s, t) for s, t, _ in ordered]
    values = [format_half_up(c.accuracy) for _, _, c in ordered]
    avg = format_half_up(report.micro_average)

    width = max([len(model_name), 8] + [len(v) for v in values])
    level_row, subject_row, type_row, value_row = [], [], [], []
    for (subject, answer_type), value in zip(columns, values):
        level_row.append(SUBJECT_LEVEL[subject])
        subject_row.append(subject)
        type_row.append("S" if answer_type == "single" else "M")
        value_row.append(value)

    def fmt(cells: list[str], head: str) -> str:
        return " | ".join([head.ljust(10)] + [c.center(width) for c in cells])

    lines = [
        fmt(level_row, "Level") + " | " + "".center(width),
        fmt(subject_row, "Subject") + " | " + "Average".center(width),
        fmt(type_row, "Type") + " | " + "".center(width),
        fmt(value_row, model_name[:10]) + " | " + avg.center(width),
    ]
    if report.n_errors:
        lines.append(f"errors: {report.n_errors} item(s) failed and scored incorrect")
    return "\n".join(lines)
