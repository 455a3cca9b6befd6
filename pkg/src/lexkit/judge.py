"""Referee-scored subjective evaluation.

A candidate answer is generated once per item, then a referee model scores
it against the ground truth on three criteria (accuracy, completeness,
clarity), each 1 to 5. Scoring repeats per item; the item's score is the
per-dimension mean of the parseable repeats. A repeat whose output cannot be
parsed gets exactly one stricter re-ask; items with no parseable judgment at
all are excluded and counted, never imputed. The report average is the mean
of the three dimension means.
"""

from __future__ import annotations

import json
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .errors import (
    AllInvalid,
    EmptyCandidate,
    ScoreMissing,
    ScoreOutOfRange,
    ValidationError,
)
from .gateway import ChatMessage, ChatRequest, Gateway, ProviderProfile, user_request
from .prompts import TemplateLibrary, default_library
from .textnorm import format_half_up

SUBJECTIVE_SCENARIOS = ("professional_tools", "consultation", "judgment_prediction")

DIMENSIONS = ("accuracy", "completeness", "clarity")

_LABEL_SYNONYMS = {
    "accuracy": ("accuracy", "acc", "准确性", "准确度", "准确"),
    "completeness": ("completeness", "cpl", "完整性", "完备性", "完整"),
    "clarity": ("clarity", "clr", "清晰性", "清晰度", "明晰", "清晰"),
}

_SCORE_RES = {
    dim: re.compile(
        r"(?:"
        + "|".join(re.escape(s) for s in sorted(syns, key=len, reverse=True))
        + r")\s*[:：=为是]?\s*(\d+(?:\.\d+)?)",
        re.IGNORECASE,
    )
    for dim, syns in _LABEL_SYNONYMS.items()
}


@dataclass(frozen=True)
class SubjectiveItem:
    id: str
    question: str
    reference_answer: str
    scenario_tag: str

    def __post_init__(self) -> None:
        if not self.question or not self.reference_answer:
            raise ValidationError("question and reference_answer must be non-empty")
        if self.scenario_tag not in SUBJECTIVE_SCENARIOS:
            raise ValidationError(f"unknown scenario_tag {self.scenario_tag!r}")


def load_subjective_dataset(path: str | Path) -> list[SubjectiveItem]:
    items = []
    with Path(path).open("r", encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            obj = json.loads(line)
            items.append(
                SubjectiveItem(
                    id=str(obj["id"]),
                    question=obj["question"],
                    reference_answer=obj["reference_answer"],
                    scenario_tag=obj["scenario_tag"],
                )
            )
    return items


@dataclass(frozen=True)
class JudgeRubric:
    accuracy: str
    completeness: str
    clarity: str

    def __post_init__(self) -> None:
        if not (self.accuracy and self.completeness and self.clarity):
            raise ValidationError("all three criterion texts must be present")


def load_default_rubric(library: TemplateLibrary | None = None) -> JudgeRubric:
    lib = library or default_library()
    return JudgeRubric(
        accuracy=lib.get("rubric_accuracy").body,
        completeness=lib.get("rubric_completeness").body,
        clarity=lib.get("rubric_clarity").body,
    )


@dataclass(frozen=True)
class JudgeScore:
    accuracy: float
    completeness: float
    clarity: float

    def __post_init__(self) -> None:
        for dim in DIMENSIONS:
            value = getattr(self, dim)
            if not (1.0 <= value <= 5.0):
                raise ScoreOutOfRange(f"{dim} score {value} outside [1, 5]")


_JUDGE_PROMPT = (
    "你是一名严格的法律答案评审。请对照标准答案（ground truth）评估待评分答案，"
    "就下面列出的三项标准分别给出1到5的评分。请按标准列出的顺序逐项作答，"
    "每项单独一行，格式为“<标准名>: <分数>”，不要输出其他内容。\n\n"
    "问题：\n{question}\n\n"
    "标准答案：\n{reference_answer}\n\n"
    "待评分答案：\n{candidate_answer}\n\n"
    "评分标准：\n"
    "Accuracy: {accuracy}\n"
    "Completeness: {completeness}\n"
    "Clarity: {clarity}"
)

_REASK_TEXT = (
    "你的上一条输出不符合要求的格式。请重新输出评分，只输出三行，"
    "每行为“<标准名>: <1到5的分数>”，标准名依次为上面列出的三项，不要输出其他内容。"
)


def build_judge_prompt(
    item: SubjectiveItem,
    candidate_answer: str,
    rubric: JudgeRubric,
    profile: ProviderProfile,
    model_id: str,
    temperature: float = 0.0,
    max_tokens: int = 256,
) -> ChatRequest:
    if not candidate_answer or not candidate_answer.strip():
        raise EmptyCandidate(f"item {item.id}: candidate answer is empty")
    text = (
        _JUDGE_PROMPT.replace("{question}", item.question)
        .replace("{reference_answer}", item.reference_answer)
        .replace("{candidate_answer}", candidate_answer)
        .replace("{accuracy}", rubric.accuracy)
        .replace("{completeness}", rubric.completeness)
        .replace("{clarity}", rubric.clarity)
    )
    return user_request(
        profile.provider_id, model_id, text, temperature=temperature, max_tokens=max_tokens
    )


def build_judge_reask(
    item: SubjectiveItem,
    candidate_answer: str,
    rubric: JudgeRubric,
    prior_response: str,
    profile: ProviderProfile,
    model_id: str,
    temperature: float = 0.0,
    max_tokens: int = 256,
) -> ChatRequest:
    """Stricter follow-up carrying the failed output as an assistant turn."""
    first = build_judge_prompt(item, candidate_answer, rubric, profile, model_id)
    return ChatRequest(
        provider_id=profile.provider_id,
        model_id=model_id,
        messages=(
            first.messages[0],
            ChatMessage("assistant", prior_response or "(空输出)"),
            ChatMessage("user", _REASK_TEXT),
        ),
        temperature=temperature,
        max_tokens=max_tokens,
    )


def parse_judge_scores(text: str) -> JudgeScore:
    """Extract the three labeled scores, tolerant of label synonyms and
    ordering. Raises ScoreMissing / ScoreOutOfRange."""
    values: dict[str, float] = {}
    for dim in DIMENSIONS:
        m = _SCORE_RES[dim].search(text)
        if m is None:
            raise ScoreMissing(f"no {dim} score found")
        values[dim] = float(m.group(1))
    return JudgeScore(**values)


@dataclass(frozen=True)
class SubjectiveReport:
    mean_acc: float
    mean_cpl: float
    mean_clr: float
    average: float
    n_items: int
    n_invalid: int
    per_scenario: dict[str, dict] | None = None


def dimension_average(acc: float, cpl: float, clr: float) -> float:
    """The report average: plain mean of the three dimension means."""
    return (acc + cpl + clr) / 3.0


@dataclass(frozen=True)
class ItemJudgment:
    item: SubjectiveItem
    candidate: str
    scores: tuple[JudgeScore, ...]  # parseable repeats only
    invalid_repeats: int

    @property
    def included(self) -> bool:
        return bool(self.scores)

    def dimension_means(self) -> tuple[float, float, float]:
        n = len(self.scores)
        return (
            sum(s.accuracy for s in self.scores) / n,
            sum(s.completeness for s in self.scores) / n,
            sum(s.clarity for s in self.scores) / n,
        )


def judge_item(
    item: SubjectiveItem,
    model_profile: ProviderProfile,
    judge_profile: ProviderProfile,
    gateway: Gateway,
    rubric: JudgeRubric,
    model_id: str,
    judge_model_id: str,
    repeats: int,
    judge_gateway: Gateway | None = None,
) -> ItemJudgment:
    judge_gw = judge_gateway or gateway
    candidate_req = user_request(model_profile.provider_id, model_id, item.question)
    candidate = gateway.complete(candidate_req, model_profile).text
    scores: list[JudgeScore] = []
    invalid = 0
    for r in range(repeats):
        request = build_judge_prompt(item, candidate, rubric, judge_profile, judge_model_id)
        response = judge_gw.complete(request, judge_profile, occurrence=r)
        try:
            scores.append(parse_judge_scores(response.text))
            continue
        except (ScoreMissing, ScoreOutOfRange):
            pass
        reask = build_judge_reask(
            item, candidate, rubric, response.text, judge_profile, judge_model_id
        )
        retry = judge_gw.complete(reask, judge_profile, occurrence=r)
        try:
            scores.append(parse_judge_scores(retry.text))
        except (ScoreMissing, ScoreOutOfRange):
            invalid += 1
    return ItemJudgment(
        item=item, candidate=candidate, scores=tuple(scores), invalid_repeats=invalid
    )


def evaluate(
    dataset: Sequence[SubjectiveItem],
    model_profile: ProviderProfile,
    judge_profile: ProviderProfile,
    gateway: Gateway,
    rubric: JudgeRubric,
    model_id: str,
    judge_model_id: str,
    repeats: int = 3,
    concurrency: int = 4,
    judge_gateway: Gateway | None = None,
) -> tuple[SubjectiveReport, list[ItemJudgment]]:
    if repeats < 1:
        raise ValidationError("repeats must be >= 1")
    if not dataset:
        raise ValidationError("subjective dataset has no items")

    def run(item: SubjectiveItem) -> ItemJudgment:
        return judge_item(
            item, model_profile, judge_profile, gateway, rubric,
            model_id, judge_model_id, repeats, judge_gateway=judge_gateway,
        )

    with ThreadPoolExecutor(max_workers=max(1, concurrency)) as pool:
        judgments = list(pool.map(run, dataset))
    judgments.sort(key=lambda j: j.item.id)

    included = [j for j in judgments if j.included]
    if not included:
        raise AllInvalid("every item was excluded for unparseable judgments")
    dims = [j.dimension_means() for j in included]
    mean_acc = sum(d[0] for d in dims) / len(dims)
    mean_cpl = sum(d[1] for d in dims) / len(dims)
    mean_clr = sum(d[2] for d in dims) / len(dims)

    per_scenario: dict[str, dict] = {}
    for scenario in SUBJECTIVE_SCENARIOS:
        rows = [j.dimension_means() for j in included if j.item.scenario_tag == scenario]
        if rows:
            per_scenario[scenario] = {
                "n": len(rows),
                "accuracy": sum(r[0] for r in rows) / len(rows),
                "completeness": sum(r[1] for r in rows) / len(rows),
                "clarity": sum(r[2] for r in rows) / len(rows),
            }

    report = SubjectiveReport(
        mean_acc=mean_acc,
        mean_cpl=mean_cpl,
        mean_clr=mean_clr,
        average=dimension_average(mean_acc, mean_cpl, mean_clr),
        n_items=len(included),
        n_invalid=len(judgments) - len(included),
        per_scenario=per_scenario or None,
    )
    return report, judgments


def render_subjective_report(report: SubjectiveReport, model_name: str = "model") -> str:
    """ACC / CPL / CLR / Average columns, two decimals half-up; excluded
    items get a footnote."""
    header = ["Model", "ACC", "CPL", "CLR", "Average"]
    row = [
        model_name,
        format_half_up(report.mean_acc),
        format_half_up(report.mean_cpl),
        format_half_up(report.mean_clr),
        format_half_up(report.average),
    ]
    widths = [max(len(h), len(v)) for h, v in zip(header, row)]
    lines = [
        "  ".join(h.ljust(w) for h, w in zip(header, widths)),
        "  ".join(v.ljust(w) for v, w in zip(row, widths)),
    ]
    if report.n_invalid:
        lines.append(f"excluded: {report.n_invalid} item(s) with unparseable judgments")
    return "\n".join(lines)


def report_summary(report: SubjectiveReport) -> dict:
    summary = {
        "mean_acc": round(report.mean_acc, 6),
        "mean_cpl": round(report.mean_cpl, 6),
        "mean_clr": round(report.mean_clr, 6),
        "average": round(report.average, 6),
        "n_items": report.n_items,
        "n_invalid": report.n_invalid,
    }
    if report.per_scenario:
        summary["per_scenario"] = {
            k: {kk: (round(vv, 6) if isinstance(vv, float) else vv) for kk, vv in v.items()}
            for k, v in report.per_scenario.items()
        }
    return summary
