"""LLM-assisted reconstruction of instruction pairs.

Three strategies: behavior shaping rewrites the answer into labeled
syllogism form; knowledge expansion turns a bare multiple-choice answer into
an explanation that must still contain the gold letters; thinking
development wraps the input with the syllogism chain-of-thought template.
Shaping and expansion retry exactly once with a stricter prompt, then reject
with accounting; rejection is never silent.
"""

from __future__ import annotations

from typing import Sequence

from ..errors import ExpansionInconsistent, ShapingRejected
from ..gateway import ChatRequest, Gateway, ProviderProfile, user_request
from ..mcq.items import McqItem
from ..prompts import PromptTemplate
from ..rag import apply_lcot
from ..syllogism import LabelLexicon, DEFAULT_LEXICON, validate_syllogism
from .types import InstructionPair, StageStats

_SHAPE_PROMPT = (
    "请将下面问题的答复改写为符合法律三段论的回答：先给出大前提（适用的法律条文），"
    "再给出小前提（本案相关事实），最后给出结论（判断），结论必须由大前提和小前提推出。"
    "三个部分分别以“大前提：”“小前提：”“结论：”开头。请使用中文回答。\n\n"
    "问题：{input}\n\n原答复：{output}\n\n改写后的回答："
)

_SHAPE_PROMPT_STRICT = (
    "严格按照格式要求改写下面问题的答复。输出必须且只能包含三段起始标签：\n"
    "“大前提：”一段、“小前提：”一段、“结论：”一段，顺序不得颠倒，内容不得为空，"
    "结论必须由大前提和小前提推出。请使用中文回答。\n\n"
    "问题：{input}\n\n原答复：{output}\n\n改写后的回答："
)

_EXPAND_PROMPT = (
    "下面是一道法律考试选择题，正确答案是{gold}。请结合相关法律知识详细解释"
    "为什么正确答案是{gold}，并逐一说明其他选项错误的原因。请使用中文回答。\n\n"
    "{question}\n\n解释："
)

_EXPAND_PROMPT_STRICT = (
    "下面是一道法律考试选择题，正确答案是{gold}。请重新作答：回答中必须明确写出"
    "正确答案{gold}，并结合相关法律知识详细解释理由。请使用中文回答。\n\n"
    "{question}\n\n解释："
)


def build_shaping_request(
    pair: InstructionPair,
    profile: ProviderProfile,
    model_id: str,
    strict: bool = False,
    temperature: float = 0.0,
) -> ChatRequest:
    prompt = _SHAPE_PROMPT_STRICT if strict else _SHAPE_PROMPT
    text = prompt.replace("{input}", pair.input).replace("{output}", pair.output)
    return user_request(profile.provider_id, model_id, text, temperature=temperature)


def behavior_shape(
    pair: InstructionPair,
    profile: ProviderProfile,
    gateway: Gateway,
    model_id: str,
    lexicon: LabelLexicon = DEFAULT_LEXICON,
) -> InstructionPair:
    """Replace the output with the model's syllogism-structured refinement."""
    for strict in (False, True):
        request = build_shaping_request(pair, profile, model_id, strict=strict)
        response = gateway.complete(request, profile)
        if validate_syllogism(response.text, lexicon):
            return InstructionPair(
                input=pair.input,
                output=response.text,
                task_tag=pair.task_tag,
                scenario_tag=pair.scenario_tag,
                source_id=pair.source_id,
                strategy="behavior_shaped",
            )
    raise ShapingRejected(f"source {pair.source_id}: no syllogism structure after retry")


def shape_pairs(
    pairs: Sequence[InstructionPair],
    profile: ProviderProfile,
    gateway: Gateway,
    model_id: str,
    lexicon: LabelLexicon = DEFAULT_LEXICON,
) -> tuple[list[InstructionPair], StageStats, list[dict]]:
    stats = StageStats(stage="shape")
    shaped: list[InstructionPair] = []
    rejections: list[dict] = []
    for pair in pairs:
        try:
            shaped.append(behavior_shape(pair, profile, gateway, model_id, lexicon))
            stats.kept += 1
        except ShapingRejected as exc:
            stats.rejected += 1
            rejections.append({"source_id": pair.source_id, "reason": str(exc)})
    return shaped, stats, rejections


def build_expansion_request(
    mcq: McqItem,
    profile: ProviderProfile,
    model_id: str,
    strict: bool = False,
    temperature: float = 0.0,
) -> ChatRequest:
    prompt = _EXPAND_PROMPT_STRICT if strict else _EXPAND_PROMPT
    gold = "".join(sorted(mcq.gold))
    text = prompt.replace("{gold}", gold).replace("{question}", mcq.formatted())
    return user_request(profile.provider_id, model_id, text, temperature=temperature)


def _expansion_ok(text: str, gold: frozenset[str]) -> bool:
    stripped = text.strip()
    bare = "".join(sorted(gold))
    return all(letter in stripped for letter in gold) and len(stripped) > len(bare)


def knowledge_expand(
    mcq: McqItem,
    profile: ProviderProfile,
    gateway: Gateway,
    model_id: str,
) -> InstructionPair:
    """Expand a gold-annotated exam question into an explained answer."""
    for strict in (False, True):
        request = build_expansion_request(mcq, profile, model_id, strict=strict)
        response = gateway.complete(request, profile)
        if _expansion_ok(response.text, mcq.gold):
            return InstructionPair(
                input=mcq.formatted(),
                output=response.text,
                task_tag="judicial_exam",
                scenario_tag="examination_assistant",
                source_id=mcq.id,
                strategy="knowledge_expanded",
            )
    raise ExpansionInconsistent(
        f"item {mcq.id}: gold letters absent or unexpanded after retry"
    )


def develop_thinking(pair: InstructionPair, template: PromptTemplate) -> InstructionPair:
    """Wrap the input with the chain-of-thought template; output unchanged."""
    return InstructionPair(
        input=apply_lcot(pair.input, template),
        output=pair.output,
        task_tag=pair.task_tag,
        scenario_tag=pair.scenario_tag,
        source_id=pair.source_id,
        strategy="lcot",
    )
