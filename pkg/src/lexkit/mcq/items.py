"""Multiple-choice items for the objective benchmark.

Items come from six exam subjects; the difficulty level is fixed by the
subject (CPA/NJE/PAE are Hard, UNGEE Normal, LBK/PFE Easy). Single-answer
items have exactly one gold letter, multi-answer items at least two; files
violating any invariant are reported with line numbers instead of being
silently accepted.
"""

from __future__ import annotations

import json
import string
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import InvariantViolation, ParseError

SUBJECTS = ("NJE", "PAE", "CPA", "UNGEE", "PFE", "LBK")
LEVELS = ("Hard", "Normal", "Easy")
ANSWER_TYPES = ("single", "multi")

SUBJECT_LEVEL = {
    "CPA": "Hard",
    "NJE": "Hard",
    "PAE": "Hard",
    "UNGEE": "Normal",
    "LBK": "Easy",
    "PFE": "Easy",
}


@dataclass(frozen=True)
class McqItem:
    id: str
    subject: str
    level: str
    answer_type: str
    stem: str
    options: dict[str, str]  # ordered letter -> text
    gold: frozenset[str] = field(default_factory=frozenset)

    def violations(self) -> list[str]:
        """Invariant check; empty list means the item is well-formed."""
        problems: list[str] = []
        if self.subject not in SUBJECTS:
            problems.append(f"unknown subject {self.subject!r}")
        if self.level not in LEVELS:
            problems.append(f"unknown level {self.level!r}")
        elif self.subject in SUBJECT_LEVEL and self.level != SUBJECT_LEVEL[self.subject]:
            problems.append(
                f"level {self.level!r} inconsistent with subject {self.subject} "
                f"(expected {SUBJECT_LEVEL[self.subject]})"
            )
        if self.answer_type not in ANSWER_TYPES:
            problems.append(f"unknown answer_type {self.answer_type!r}")
        if not self.stem.strip():
            problems.append("empty stem")
        letters = list(self.options)
        if len(letters) < 2:
            problems.append("fewer than 2 options")
        expected = list(string.ascii_uppercase[: len(letters)])
        if letters != expected:
            problems.append(f"option letters {letters} are not consecutive from A")
        if not self.gold:
            problems.append("empty gold set")
        if not self.gold <= set(letters):
            problems.append(f"gold letters {sorted(self.gold)} outside options")
        if self.answer_type == "single" and len(self.gold) != 1:
            problems.append(f"single-answer item with {len(self.gold)} gold letters")
        if self.answer_type == "multi" and len(self.gold) < 2:
            problems.append(f"multi-answer item with {len(self.gold)} gold letters")
        return problems

    @property
    def option_letters(self) -> tuple[str, ...]:
        return tuple(self.options)

    def formatted(self, with_answer: bool = False) -> str:
        lines = [f"题目：{self.stem}"]
        lines += [f"{letter}. {text}" for letter, text in self.options.items()]
        if with_answer:
            lines.append(f"答案：{''.join(sorted(self.gold))}")
        return "\n".join(lines)


def load_mcq_dataset(path: str | Path) -> list[McqItem]:
    """Parse one JSON record per line with fields
    {id, subject, level, answer_type, stem, options, gold}."""
    items: list[McqItem] = []
    problems: list[str] = []
    seen_ids: set[str] = set()
    with Path(path).open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                item = McqItem(
                    id=str(obj["id"]),
                    subject=obj["subject"],
                    level=obj["level"],
                    answer_type=obj["answer_type"],
                    stem=obj["stem"],
                    options=dict(obj["options"]),
                    gold=frozenset(obj["gold"]),
                )
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise ParseError(f"line {lineno}: {exc}") from exc
            if item.id in seen_ids:
                problems.append(f"line {lineno}: duplicate id {item.id!r}")
            seen_ids.add(item.id)
            problems.extend(f"line {lineno}: {p}" for p in item.violations())
            items.append(item)
    if problems:
        raise InvariantViolation("; ".join(problems))
    return items
