"""Prompt assembly and the consult pipeline.

consult = search -> assemble_rag_prompt -> complete. Retrieval hits with a
zero score carry no evidence (no term overlap) and are dropped before prompt
assembly, so a query matching nothing is answered through the no-reference
template variant with an empty citation list. References are rendered in
rank order as numbered blocks; when the rendered block exceeds the character
budget, the lowest-ranked hits are dropped first. Citations returned on the
answer are exactly the hits whose reference blocks made it into the prompt.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from pathlib import Path

from .errors import AlreadyWrapped, EmptyInput, UnresolvedChunk
from .gateway import ChatRequest, Gateway, ProviderProfile, user_request
from .kb import KnowledgeBase, RetrievalConfig, RetrievalHit
from .prompts import PromptTemplate

DEFAULT_REFERENCE_BUDGET = 3000

_trace_lock = threading.Lock()


def apply_lcot(case_text: str, template: PromptTemplate) -> str:
    """Wrap a case text with the syllogism chain-of-thought template.

    The output is byte-exactly the template body with {X} replaced by the
    case text. Re-wrapping already-wrapped text is refused: the template's
    first line acts as the wrapper sentinel.
    """
    if not case_text or not case_text.strip():
        raise EmptyInput("case text is empty")
    sentinel = template.body.split("\n", 1)[0].strip()
    if sentinel and sentinel in case_text:
        raise AlreadyWrapped("input already carries the syllogism wrapper")
    return template.body.replace("{X}", case_text)


def render_reference_block(hit: RetrievalHit, kb: KnowledgeBase, number: int) -> str:
    chunk = kb.resolve_chunk(hit.chunk_id)
    doc = kb.store.get(chunk.doc_id, version=chunk.version)
    source = f"{doc.category} · {doc.title}"
    if chunk.article_no is not None:
        source += f" · 第{chunk.article_no}条"
    return f"[{number}] {source}\n{chunk.text.strip()}"


@dataclass(frozen=True)
class AssembledPrompt:
    request: ChatRequest
    included_hits: tuple[RetrievalHit, ...]
    references_text: str


def assemble_rag_prompt(
    query: str,
    hits: list[RetrievalHit],
    template: PromptTemplate,
    kb: KnowledgeBase,
    profile: ProviderProfile,
    model_id: str,
    temperature: float = 0.0,
    max_tokens: int = 1024,
    char_budget: int = DEFAULT_REFERENCE_BUDGET,
) -> AssembledPrompt:
    """Render the consult prompt. Hits must resolve to indexed chunks."""
    blocks: list[str] = []
    for i, hit in enumerate(hits, start=1):
        try:
            blocks.append(render_reference_block(hit, kb, i))
        except Exception as exc:
            raise UnresolvedChunk(hit.chunk_id) from exc

    included = list(hits)
    while included and len("\n\n".join(blocks[: len(included)])) > char_budget:
        included.pop()  # lowest-ranked first
    references_text = "\n\n".join(blocks[: len(included)])

    if included:
        text = template.render({"references": references_text, "input": query})
    else:
        text = template.render({"input": query}, noref=True)
    request = user_request(
        profile.provider_id, model_id, text, temperature=temperature, max_tokens=max_tokens
    )
    return AssembledPrompt(
        request=request,
        included_hits=tuple(included),
        references_text=references_text,
    )


@dataclass(frozen=True)
class ConsultAnswer:
    text: str
    citations: tuple[RetrievalHit, ...]
    template_name: str
    trace_id: str


def _write_trace(trace_path: str | Path | None, record: dict) -> None:
    if trace_path is None:
        return
    path = Path(trace_path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with _trace_lock, path.open("a", encoding="utf-8") as fh:
        fh.write(json.dumps(record, ensure_ascii=False) + "\n")


def consult(
    query: str,
    retrieval_config: RetrievalConfig,
    template: PromptTemplate,
    profile: ProviderProfile,
    kb: KnowledgeBase,
    gateway: Gateway,
    model_id: str,
    trace_path: str | Path | None = None,
    char_budget: int = DEFAULT_REFERENCE_BUDGET,
) -> ConsultAnswer:
    """Retrieve references, format them with the user input, call the model.

    The trace line is persisted whether the call succeeds or fails. Under a
    replay gateway with a fixed corpus and config the whole pipeline is a
    pure function of the query (the trace id derives from the request tag).
    """
    hits = kb.search(query, retrieval_config)
    evidence = [h for h in hits if h.score > 0.0]
    assembled = assemble_rag_prompt(
        query,
        evidence,
        template,
        kb,
        profile,
        model_id,
        char_budget=char_budget,
    )
    trace_id = "t-" + assembled.request.request_tag[:16]
    record = {
        "trace_id": trace_id,
        "template": f"{template.name}@v{template.version}",
        "request_tag": assembled.request.request_tag,
        "query": query,
        "citations": [h.chunk_id for h in assembled.included_hits],
        "ok": False,
        "error": None,
    }
    try:
        response = gateway.complete(assembled.request, profile)
        record["ok"] = True
    except Exception as exc:
        record["error"] = f"{type(exc).__name__}: {exc}"
        raise
    finally:
        _write_trace(trace_path, record)
    return ConsultAnswer(
        text=response.text,
        citations=assembled.included_hits,
        template_name=template.name,
        trace_id=trace_id,
    )
