"""Instruction dataset record types and per-stage accounting."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import ValidationError

SOURCE_KINDS = ("public_task_dataset", "legal_raw_text", "open_instruction")

TASK_TAGS = (
    "element_extraction",
    "event_detection",
    "case_classification",
    "judgement_prediction",
    "case_matching",
    "doc_summarization",
    "opinion_summarization",
    "legal_qa",
    "reading_comprehension",
    "judicial_exam",
)

SCENARIO_TAGS = ("professional_tools", "consultation", "examination_assistant", "general")

# Task -> scenario pairing; records without a legal task belong to "general".
TASK_SCENARIO = {
    "element_extraction": "professional_tools",
    "event_detection": "professional_tools",
    "case_classification": "professional_tools",
    "judgement_prediction": "professional_tools",
    "case_matching": "professional_tools",
    "doc_summarization": "professional_tools",
    "opinion_summarization": "professional_tools",
    "legal_qa": "consultation",
    "reading_comprehension": "examination_assistant",
    "judicial_exam": "examination_assistant",
}

STRATEGIES = ("cleaned", "behavior_shaped", "knowledge_expanded", "lcot")


def check_tags(task_tag: str | None, scenario_tag: str) -> None:
    if scenario_tag not in SCENARIO_TAGS:
        raise ValidationError(f"unknown scenario_tag {scenario_tag!r}")
    if task_tag is None:
        if scenario_tag != "general":
            raise ValidationError("records without a task tag must be scenario 'general'")
        return
    if task_tag not in TASK_TAGS:
        raise ValidationError(f"unknown task_tag {task_tag!r}")
    if TASK_SCENARIO[task_tag] != scenario_tag:
        raise ValidationError(
            f"task {task_tag!r} belongs to scenario {TASK_SCENARIO[task_tag]!r}, "
            f"got {scenario_tag!r}"
        )


@dataclass(frozen=True)
class RawRecord:
    source_id: str
    source_kind: str
    payload: dict[str, str]

    def __post_init__(self) -> None:
        if self.source_kind not in SOURCE_KINDS:
            raise ValidationError(f"unknown source_kind {self.source_kind!r}")
        if not self.payload:
            raise ValidationError("payload is empty")


@dataclass(frozen=True)
class InstructionPair:
    input: str
    output: str
    scenario_tag: str
    source_id: str
    strategy: str = "cleaned"
    task_tag: str | None = None

    def __post_init__(self) -> None:
        if not self.input or not self.output:
            raise ValidationError("pair input and output must be non-empty")
        if self.strategy not in STRATEGIES:
            raise ValidationError(f"unknown strategy {self.strategy!r}")
        check_tags(self.task_tag, self.scenario_tag)


@dataclass(frozen=True)
class InstructionTriplet:
    input: str
    output: str
    references: tuple[str, ...]
    scenario_tag: str
    source_id: str
    strategy: str = "cleaned"
    task_tag: str | None = None

    def __post_init__(self) -> None:
        if not self.input or not self.output:
            raise ValidationError("triplet input and output must be non-empty")
        if not self.references or any(not r for r in self.references):
            raise ValidationError("references must be a non-empty list of non-empty strings")
        if self.strategy not in STRATEGIES:
            raise ValidationError(f"unknown strategy {self.strategy!r}")
        check_tags(self.task_tag, self.scenario_tag)


InstructionItem = InstructionPair | InstructionTriplet


@dataclass
class StageStats:
    """Conservation accounting: kept + dropped + rejected equals the number
    of records entering the stage."""

    stage: str
    kept: int = 0
    dropped: int = 0
    rejected: int = 0
    drop_reasons: dict[str, int] = field(default_factory=dict)

    @property
    def total(self) -> int:
        return self.kept + self.dropped + self.rejected

    def drop(self, reason: str) -> None:
        self.dropped += 1
        self.drop_reasons[reason] = self.drop_reasons.get(reason, 0) + 1

    def to_dict(self) -> dict:
        return {
            "stage": self.stage,
            "kept": self.kept,
            "dropped": self.dropped,
            "rejected": self.rejected,
            "drop_reasons": dict(sorted(self.drop_reasons.items())),
        }


@dataclass(frozen=True)
class TaskSchema:
    """Maps raw payload fields onto instruction roles."""

    input_field: str
    output_field: str
    scenario_tag: str
    task_tag: str | None = None

    def __post_init__(self) -> None:
        check_tags(self.task_tag, self.scenario_tag)

    @classmethod
    def from_file(cls, path: str | Path) -> "TaskSchema":
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
        return cls(
            input_field=obj["input_field"],
            output_field=obj["output_field"],
            scenario_tag=obj["scenario_tag"],
            task_tag=obj.get("task_tag"),
        )


def load_raw_records(path: str | Path) -> list[RawRecord]:
    """One JSON record per line: {source_id, source_kind, payload}."""
    records = []
    with Path(path).open("r", encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            obj = json.loads(line)
            records.append(
                RawRecord(
                    source_id=str(obj["source_id"]),
                    source_kind=obj["source_kind"],
                    payload={str(k): str(v) for k, v in obj["payload"].items()},
                )
            )
    return records
