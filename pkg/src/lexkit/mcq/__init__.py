from .extraction import ExtractionOutcome, extract_answer, score_item
from .fewshot import FewShotConfig, build_prompt, select_exemplars
from .items import SUBJECT_LEVEL, McqItem, load_mcq_dataset
from .report import (
    AccuracyReport,
    Cell,
    ItemResult,
    aggregate,
    micro_average,
    render_report,
)
from .runner import ItemOutcome, RunResult, evaluate

__all__ = [
    "AccuracyReport",
    "Cell",
    "ExtractionOutcome",
    "FewShotConfig",
    "ItemOutcome",
    "ItemResult",
    "McqItem",
    "RunResult",
    "SUBJECT_LEVEL",
    "aggregate",
    "build_prompt",
    "evaluate",
    "extract_answer",
    "load_mcq_dataset",
    "micro_average",
    "render_report",
    "score_item",
    "select_exemplars",
]
