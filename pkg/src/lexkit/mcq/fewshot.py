"""Deterministic few-shot prompt assembly (4-shot single / 5-shot multi).

Exemplars are drawn from a pool disjoint from the scored items: candidates
share the item's answer type and subject, falling back to any subject with
the same answer type. Selection ranks candidates by a seed-keyed hash, so
(seed, pool, item) fully determines the prompt bytes with no RNG state.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Sequence

from ..errors import ExemplarShortage
from ..gateway import ChatRequest, ProviderProfile, user_request
from .items import McqItem

HEADER_SINGLE = (
    "以下是中国法律考试单项选择题，请根据题干和选项选出唯一正确的答案，"
    "并以“答案：X”的格式作答。"
)
HEADER_MULTI = (
    "以下是中国法律考试多项选择题，请根据题干和选项选出全部正确的答案，"
    "并以“答案：XY”的格式作答。"
)


@dataclass(frozen=True)
class FewShotConfig:
    n_single: int = 4
    n_multi: int = 5
    seed: int = 0
    exemplar_pool_path: str | None = None

    def shots_for(self, answer_type: str) -> int:
        return self.n_single if answer_type == "single" else self.n_multi


def _rank_key(seed: int, item_id: str, candidate_id: str) -> str:
    return hashlib.sha256(f"{seed}|{item_id}|{candidate_id}".encode("utf-8")).hexdigest()


def select_exemplars(
    item: McqItem, pool: Sequence[McqItem], config: FewShotConfig
) -> list[McqItem]:
    n = config.shots_for(item.answer_type)
    same_type = [c for c in pool if c.answer_type == item.answer_type and c.id != item.id]
    candidates = [c for c in same_type if c.subject == item.subject]
    if len(candidates) < n:
        candidates = same_type
    if len(candidates) < n:
        raise ExemplarShortage(
            f"need {n} exemplars of type {item.answer_type}, pool has {len(candidates)}"
        )
    ranked = sorted(candidates, key=lambda c: _rank_key(config.seed, item.id, c.id))
    return ranked[:n]


def build_prompt(
    item: McqItem,
    config: FewShotConfig,
    pool: Sequence[McqItem],
    profile: ProviderProfile,
    model_id: str,
    temperature: float = 0.0,
    max_tokens: int = 512,
) -> ChatRequest:
    exemplars = select_exemplars(item, pool, config)
    header = HEADER_SINGLE if item.answer_type == "single" else HEADER_MULTI
    blocks = [header]
    blocks += [ex.formatted(with_answer=True) for ex in exemplars]
    blocks.append(item.formatted() + "\n答案：")
    return user_request(
        profile.provider_id,
        model_id,
        "\n\n".join(blocks),
        temperature=temperature,
        max_tokens=max_tokens,
    )
