"""End-to-end objective evaluation: prompt, complete, extract, score,
aggregate. Items evaluate in parallel up to a bound; aggregation folds in
item-id order so the report is independent of completion order."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

from ..errors import EmptyDataset, InvariantViolation, LexkitError
from ..gateway import Gateway, ProviderProfile
from .extraction import ExtractionOutcome, extract_answer, score_item
from .fewshot import FewShotConfig, build_prompt
from .items import McqItem
from .report import AccuracyReport, ItemResult, aggregate


@dataclass(frozen=True)
class ItemOutcome:
    item: McqItem
    extraction: ExtractionOutcome | None
    correct: bool
    errored: bool
    error: str | None = None


@dataclass(frozen=True)
class RunResult:
    report: AccuracyReport
    outcomes: tuple[ItemOutcome, ...]


def evaluate(
    dataset: Sequence[McqItem],
    pool: Sequence[McqItem],
    config: FewShotConfig,
    profile: ProviderProfile,
    gateway: Gateway,
    model_id: str,
    concurrency: int = 4,
) -> RunResult:
    if not dataset:
        raise EmptyDataset("objective dataset has no items")
    overlap = {i.id for i in dataset} & {p.id for p in pool}
    if overlap:
        raise InvariantViolation(
            f"exemplar pool overlaps scored items: {sorted(overlap)[:5]}"
        )

    def run_item(item: McqItem) -> ItemOutcome:
        request = build_prompt(item, config, pool, profile, model_id)
        try:
            response = gateway.complete(request, profile)
        except LexkitError as exc:
            # failed items score incorrect rather than being excluded
            return ItemOutcome(item, None, correct=False, errored=True, error=str(exc))
        extraction = extract_answer(response.text, item.option_letters)
        return ItemOutcome(
            item, extraction, correct=score_item(extraction.letters, item.gold), errored=False
        )

    with ThreadPoolExecutor(max_workers=max(1, concurrency)) as pool_exec:
        outcomes = list(pool_exec.map(run_item, dataset))
    outcomes.sort(key=lambda o: o.item.id)
    results = [
        ItemResult(
            item_id=o.item.id,
            subject=o.item.subject,
            answer_type=o.item.answer_type,
            correct=o.correct,
            errored=o.errored,
        )
        for o in outcomes
    ]
    return RunResult(report=aggregate(results), outcomes=tuple(outcomes))
