#!/usr/bin/env python3
"""Offline consult walkthrough: build a tiny statute base, record a scripted
model response, then replay the full retrieve-assemble-complete pipeline
twice to show determinism. No network involved.
"""

from __future__ import annotations

from lexkit.gateway import Gateway, ProviderProfile, TranscriptEntry, TranscriptStore
from lexkit.kb import KnowledgeBase, RetrievalConfig
from lexkit.prompts import default_library
from lexkit.rag import assemble_rag_prompt, consult

QUERY = "离婚后抚养费应当由谁负担？"
SCRIPTED_ANSWER = (
    "大前提：相关条文规定，离婚后子女抚养费由不直接抚养的一方负担 [1]。\n"
    "小前提：咨询人已离婚且子女随对方生活。\n"
    "结论：咨询人作为不直接抚养的一方应当负担抚养费。"
)


def main() -> None:
    kb = KnowledgeBase()
    kb.upsert(
        "第一条 夫妻在婚姻关系存续期间所得的财产为共同财产。\n"
        "第二条 离婚后，子女抚养费由不直接抚养的一方负担。",
        {"category": "婚姻家庭", "title": "婚姻家事条例"},
    )
    kb.upsert(
        "第一条 著作权属于作者。",
        {"category": "知识产权", "title": "著作权条例"},
    )

    profile = ProviderProfile(provider_id="demo", mode="replay")
    template = default_library().get("rag_default")

    # "record": compute the request the pipeline will send and script its answer
    hits = [h for h in kb.search(QUERY, RetrievalConfig(k=3)) if h.score > 0]
    assembled = assemble_rag_prompt(QUERY, hits, template, kb, profile, "demo-model")
    store = TranscriptStore([TranscriptEntry(assembled.request.request_tag, SCRIPTED_ANSWER)])
    gateway = Gateway(store)

    print(f"query: {QUERY}\n")
    print("rendered prompt:")
    print("-" * 60)
    print(assembled.request.messages[0].content)
    print("-" * 60)

    answers = [
        consult(QUERY, RetrievalConfig(k=3), template, profile, kb, gateway, "demo-model")
        for _ in range(2)
    ]
    assert answers[0] == answers[1], "replay consult must be deterministic"

    answer = answers[0]
    print(f"\nanswer (trace {answer.trace_id}):\n{answer.text}\n")
    print("citations:")
    for hit in answer.citations:
        chunk = kb.resolve_chunk(hit.chunk_id)
        doc = kb.store.get(chunk.doc_id)
        article = f"第{chunk.article_no}条" if chunk.article_no else "全文"
        print(f"  [{hit.rank}] {doc.category} · {doc.title} · {article} (score {hit.score:.4f})")


if __name__ == "__main__":
    main()
