"""Triplet assembly, dataset export, and subset statistics."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import TYPE_CHECKING, Iterable, Sequence

from ..errors import AlignmentError, IoError
from .citations import DEFAULT_PATTERNS, extract_references
from .types import InstructionItem, InstructionPair, InstructionTriplet, RawRecord, StageStats

if TYPE_CHECKING:
    from ..kb import KnowledgeBase

SCENARIO_DISPLAY = {
    "professional_tools": "Professional Tools",
    "consultation": "Consultation",
    "examination_assistant": "Examination Assistant",
    "general": "General",
}


def build_triplets(
    pairs: Sequence[InstructionPair],
    raw_records: Sequence[RawRecord],
    pattern_set: Sequence[re.Pattern] = DEFAULT_PATTERNS,
    kb: "KnowledgeBase | None" = None,
) -> tuple[list[InstructionTriplet], list[InstructionPair], StageStats]:
    """Emit a triplet for every pair whose raw record cites at least one
    statute; pairs without citations stay pair-only. Pairs and records are
    aligned by source_id."""
    by_id = {r.source_id: r for r in raw_records}
    stats = StageStats(stage="triplet")
    triplets: list[InstructionTriplet] = []
    remaining: list[InstructionPair] = []
    for pair in pairs:
        record = by_id.get(pair.source_id)
        if record is None:
            raise AlignmentError(f"no raw record for source_id {pair.source_id!r}")
        corpus = "\n".join(record.payload[k] for k in sorted(record.payload))
        references = extract_references(corpus, pattern_set, kb)
        if references:
            triplets.append(
                InstructionTriplet(
                    input=pair.input,
                    output=pair.output,
                    references=tuple(references),
                    task_tag=pair.task_tag,
                    scenario_tag=pair.scenario_tag,
                    source_id=pair.source_id,
                    strategy=pair.strategy,
                )
            )
        else:
            remaining.append(pair)
        stats.kept += 1
    return triplets, remaining, stats


def item_to_line(item: InstructionItem) -> str:
    obj: dict = {"input": item.input, "output": item.output}
    if isinstance(item, InstructionTriplet):
        obj["references"] = list(item.references)
    obj["task_tag"] = item.task_tag
    obj["scenario_tag"] = item.scenario_tag
    obj["strategy"] = item.strategy
    obj["source_id"] = item.source_id
    return json.dumps(obj, ensure_ascii=False)


def export_dataset(items: Iterable[InstructionItem], path: str | Path) -> None:
    """One record per line, ordered by source_id (stable for equal ids)."""
    ordered = sorted(items, key=lambda item: item.source_id)
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", encoding="utf-8") as fh:
            for item in ordered:
                fh.write(item_to_line(item) + "\n")
    except OSError as exc:
        raise IoError(str(exc)) from exc


def load_dataset(path: str | Path) -> list[InstructionItem]:
    items: list[InstructionItem] = []
    with Path(path).open("r", encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            obj = json.loads(line)
            common = dict(
                input=obj["input"],
                output=obj["output"],
                task_tag=obj.get("task_tag"),
                scenario_tag=obj["scenario_tag"],
                source_id=obj["source_id"],
                strategy=obj["strategy"],
            )
            if obj.get("references"):
                items.append(InstructionTriplet(references=tuple(obj["references"]), **common))
            else:
                items.append(InstructionPair(**common))
    return items


def subset_of(item: InstructionItem) -> str:
    if isinstance(item, InstructionTriplet):
        return "triplet"
    if item.scenario_tag == "general":
        return "general"
    return "pair"


@dataclass
class DatasetStats:
    rows: dict[tuple[str, str | None, str], int] = field(default_factory=dict)

    def add(self, item: InstructionItem) -> None:
        key = (subset_of(item), item.task_tag, item.scenario_tag)
        self.rows[key] = self.rows.get(key, 0) + 1

    @property
    def total(self) -> int:
        return sum(self.rows.values())

    def subset_total(self, subset: str) -> int:
        return sum(n for (s, _, _), n in self.rows.items() if s == subset)

    def to_dict(self) -> dict:
        return {
            "rows": [
                {"subset": s, "task_tag": t, "scenario_tag": sc, "size": n}
                for (s, t, sc), n in sorted(
                    self.rows.items(), key=lambda kv: (kv[0][0], kv[0][1] or "", kv[0][2])
                )
            ],
            "subset_totals": {
                s: self.subset_total(s) for s in ("pair", "triplet", "general")
            },
            "total": self.total,
        }


def dataset_stats(items: Iterable[InstructionItem]) -> DatasetStats:
    stats = DatasetStats()
    for item in items:
        stats.add(item)
    return stats


def _task_display(task_tag: str | None) -> str:
    if task_tag is None:
        return "-"
    special = {"legal_qa": "Legal QA", "doc_summarization": "Document Summarization"}
    return special.get(task_tag, task_tag.replace("_", " ").title())


def render_stats(stats: DatasetStats) -> str:
    """Four-column table: Dataset | Task | Size | Scenario, grouped by
    subset with a trailing total row."""
    rows: list[tuple[str, str, str, str]] = [("Dataset", "Task", "Size", "Scenario")]
    for subset in ("pair", "triplet", "general"):
        group = [
            (task, scenario, n)
            for (s, task, scenario), n in sorted(
                stats.rows.items(), key=lambda kv: (-kv[1], kv[0][1] or "")
            )
            if s == subset
        ]
        for i, (task, scenario, n) in enumerate(group):
            rows.append(
                (
                    subset if i == 0 else "",
                    _task_display(task),
                    str(n),
                    SCENARIO_DISPLAY[scenario],
                )
            )
    rows.append(("Total", "", str(stats.total), ""))
    widths = [max(len(r[i]) for r in rows) for i in range(4)]
    lines = []
    for r in rows:
        lines.append(" | ".join(cell.ljust(widths[i]) for i, cell in enumerate(r)).rstrip())
    ruler = "-+-".join("-" * w for w in widths)
    lines.insert(1, ruler)
    return "\n".join(lines)
