#!/usr/bin/env python3
"""Regenerate the committed replay fixtures under tests/data/.

Transcripts are keyed by canonical request hashes, so any change to prompt
wording or few-shot assembly requires re-running this script. The expected
reports asserted by the tests are hand-computed from the scripted responses
below and do NOT come from running the pipeline.

  python3 scripts/make_fixtures.py
"""

from __future__ import annotations

import json
from pathlib import Path

from lexkit.forge import (
    TaskSchema,
    build_shaping_request,
    clean_and_pair,
    load_raw_records,
)
from lexkit.gateway import (
    ProviderProfile,
    TranscriptEntry,
    TranscriptStore,
    transcript_export,
    user_request,
)
from lexkit.judge import build_judge_prompt, build_judge_reask, load_default_rubric
from lexkit.mcq import FewShotConfig, build_prompt, load_mcq_dataset

DATA = Path(__file__).resolve().parent.parent / "tests" / "data"
PROFILE = ProviderProfile(provider_id="fixture", mode="replay")
MODEL = "scripted-v1"
JUDGE_MODEL = "judge-v1"
SEED = 7

SUBJECT_LEVEL = {"NJE": "Hard", "PAE": "Hard", "CPA": "Hard",
                 "UNGEE": "Normal", "PFE": "Easy", "LBK": "Easy"}


def write_jsonl(path: Path, rows: list[dict]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row, ensure_ascii=False) + "\n")


# ----------------------------------------------------------------- MCQ

def mcq_row(qid: str, subject: str, answer_type: str, gold: str, stem: str) -> dict:
    return {
        "id": qid,
        "subject": subject,
        "level": SUBJECT_LEVEL[subject],
        "answer_type": answer_type,
        "stem": stem,
        "options": {"A": "甲说法", "B": "乙说法", "C": "丙说法", "D": "丁说法"},
        "gold": sorted(gold),
    }


# (id, subject, type, gold, scripted response, correct?) — correctness is
# the hand-derived consequence of the frozen extraction grammar.
MCQ_SCRIPT = [
    ("q01", "NJE", "single", "B", "经分析，正确答案是B。", True),
    ("q02", "NJE", "single", "A", "答案：C", False),
    ("q03", "NJE", "single", "D", "我会选D。", True),
    ("q04", "NJE", "multi", "AC", "答案：AC", True),
    ("q05", "NJE", "multi", "BD", "答案是B。", False),
    ("q06", "NJE", "multi", "ABC", "ABC", True),
    ("q07", "PAE", "single", "C", "Answer: C", True),
    ("q08", "PAE", "single", "B", "无法确定。", False),
    ("q09", "PAE", "multi", "AD", "答案为A、D。", True),
    ("q10", "PAE", "multi", "BC", "答案是BCD", False),
    ("q11", "CPA", "single", "A", "答案：A", True),
    ("q12", "CPA", "single", "D", "选B。", False),
    ("q13", "CPA", "multi", "AB", "AB", True),
    ("q14", "CPA", "multi", "CD", "答案是C和D", True),
    ("q15", "UNGEE", "single", "B", "答案是B", True),
    ("q16", "UNGEE", "single", "C", "答案：C", True),
    ("q17", "UNGEE", "single", "A", "D", False),
    ("q18", "UNGEE", "multi", "AC", "答案：A、C", True),
    ("q19", "PFE", "single", "D", "答案为D。", True),
    ("q20", "PFE", "single", "A", "答案是A。", True),
    ("q21", "PFE", "single", "B", "答案是C。", False),
    ("q22", "LBK", "single", "C", "答案：C", True),
    ("q23", "LBK", "single", "D", "答案是D", True),
    ("q24", "LBK", "single", "A", "B", False),
]

EXEMPLARS = [
    ("x01", "NJE", "single", "A"), ("x02", "NJE", "single", "C"),
    ("x03", "PAE", "single", "B"), ("x04", "CPA", "single", "D"),
    ("x05", "UNGEE", "single", "B"), ("x06", "LBK", "single", "A"),
    ("x07", "NJE", "multi", "AB"), ("x08", "NJE", "multi", "CD"),
    ("x09", "PAE", "multi", "AC"), ("x10", "CPA", "multi", "BD"),
    ("x11", "UNGEE", "multi", "ABC"), ("x12", "NJE", "multi", "AD"),
]


def make_mcq_fixture() -> None:
    items = [
        mcq_row(qid, subject, answer_type, gold, f"{qid}：下列关于本题的说法正确的是？")
        for qid, subject, answer_type, gold, _, _ in MCQ_SCRIPT
    ]
    write_jsonl(DATA / "mcq_fixture.jsonl", items)
    pool = [
        mcq_row(xid, subject, answer_type, gold, f"{xid}：示例题干，正确选项为{gold}。")
        for xid, subject, answer_type, gold in EXEMPLARS
    ]
    write_jsonl(DATA / "mcq_exemplars.jsonl", pool)

    dataset = load_mcq_dataset(DATA / "mcq_fixture.jsonl")
    pool_items = load_mcq_dataset(DATA / "mcq_exemplars.jsonl")
    config = FewShotConfig(seed=SEED)
    responses = {qid: text for qid, _, _, _, text, _ in MCQ_SCRIPT}
    store = TranscriptStore()
    for item in dataset:
        request = build_prompt(item, config, pool_items, PROFILE, MODEL)
        store.append(TranscriptEntry(request.request_tag, responses[item.id]))
    transcript_export(store, DATA / "mcq_transcripts.jsonl")
    print(f"mcq: {len(dataset)} items, {len(store)} transcript entries")


# ------------------------------------------------------------ subjective

def judge_text(a: int, c: int, l: int) -> str:
    return f"Accuracy: {a}\nCompleteness: {c}\nClarity: {l}"


SUBJ_ITEMS = [
    ("s01", "consultation", "离婚后子女抚养费如何确定？", "按子女实际需要与父母负担能力确定。"),
    ("s02", "consultation", "借条超过三年还能起诉吗？", "诉讼时效三年，自履行期届满起算，可中断。"),
    ("s03", "professional_tools", "归纳本案争议焦点。", "焦点为合同效力与违约责任承担。"),
    ("s04", "judgment_prediction", "预测本案判决结果。", "应判令被告支付欠款及逾期利息。"),
    ("s05", "professional_tools", "提取该判决书的当事人信息。", "原告甲公司，被告乙某。"),
    ("s06", "judgment_prediction", "本案是否构成正当防卫？", "构成正当防卫，不负刑事责任。"),
]

CANDIDATES = {
    "s01": "候选：抚养费按月收入两到三成确定。",
    "s02": "候选：可以起诉，但可能丧失胜诉权。",
    "s03": "候选：争议焦点是合同是否有效。",
    "s04": "候选：预计被告败诉。",
    "s05": "候选：原告甲公司，被告乙某。",
    "s06": "候选：属于防卫过当。",
}

# per item: three judge outputs (one per repeat); None means unparseable
# garbage that triggers the stricter re-ask.
JUDGE_SCRIPTS: dict[str, list[str]] = {
    "s01": [judge_text(4, 4, 4), judge_text(5, 5, 5), judge_text(3, 3, 3)],
    "s02": [judge_text(3, 2, 4), judge_text(3, 2, 4), judge_text(3, 2, 4)],
    "s03": [judge_text(5, 4, 5), judge_text(4, 4, 4), judge_text(3, 4, 3)],
    "s04": ["分数略。", judge_text(2, 3, 2), judge_text(2, 3, 2)],
    "s05": [judge_text(4, 5, 4), judge_text(4, 5, 4), judge_text(4, 5, 4)],
    "s06": ["拒绝评分。", "这个答案还不错。", "不予置评！"],
}

# re-ask responses keyed by (item, repeat); s04 is rescued, s06 never is.
REASK_SCRIPTS: dict[tuple[str, int], str] = {
    ("s04", 0): judge_text(2, 3, 2),
    ("s06", 0): "我还是不想打分。",
    ("s06", 1): "请咨询人类评审。",
    ("s06", 2): "无可奉告。",
}

# Hand-computed expectation (frozen in tests/test_acceptance.py):
# included items s01 (4,4,4), s02 (3,2,4), s03 (4,4,4), s04 (2,3,2),
# s05 (4,5,4); s06 excluded. Means: acc 17/5=3.4, cpl 18/5=3.6,
# clr 18/5=3.6, average 10.6/3=3.533333.


def make_subjective_fixture() -> None:
    rows = [
        {"id": sid, "question": q, "reference_answer": ref, "scenario_tag": scen}
        for sid, scen, q, ref in SUBJ_ITEMS
    ]
    write_jsonl(DATA / "subjective_fixture.jsonl", rows)
    rubric = load_default_rubric()
    store = TranscriptStore()
    from lexkit.judge import load_subjective_dataset

    items = load_subjective_dataset(DATA / "subjective_fixture.jsonl")
    for item in items:
        candidate = CANDIDATES[item.id]
        cand_req = user_request(PROFILE.provider_id, MODEL, item.question)
        store.append(TranscriptEntry(cand_req.request_tag, candidate))
        judge_req = build_judge_prompt(item, candidate, rubric, PROFILE, JUDGE_MODEL)
        for repeat, text in enumerate(JUDGE_SCRIPTS[item.id]):
            store.append(TranscriptEntry(judge_req.request_tag, text))
            if (item.id, repeat) in REASK_SCRIPTS:
                reask = build_judge_reask(
                    item, candidate, rubric, text, PROFILE, JUDGE_MODEL
                )
                store.append(
                    TranscriptEntry(reask.request_tag, REASK_SCRIPTS[(item.id, repeat)])
                )
    transcript_export(store, DATA / "subjective_transcripts.jsonl")
    print(f"subjective: {len(items)} items, {len(store)} transcript entries")


# ----------------------------------------------------------------- forge

MISSING_ANSWER = {50, 100, 150, 200}
MISSING_QUESTION = {25, 75, 125, 175}
SHAPE_REJECTS = {3, 106, 183}  # chosen off the citation lattice (i % 4 == 1)

GOOD_SHAPE = (
    "大前提：《民法典》相关条文对该情形作出了规定。\n"
    "小前提：本案事实与条文构成要件相符（记录{idx}）。\n"
    "结论：应当依法承担相应责任。"
)
BAD_SHAPE = "大前提：《民法典》相关条文。\n小前提：本案事实（记录{idx}）。"

# Hand-derived stage accounting (frozen in tests/test_acceptance.py):
# clean   kept 192, dropped 8 (4 missing_output + 4 missing_input)
# shape   kept 189, rejected 3
# lcot    189 of 189
# triplet 48 triplets (i % 4 == 1 survivors) + 141 pairs = 189


def forge_record(i: int) -> dict:
    payload: dict[str, str] = {}
    if i not in MISSING_QUESTION:
        payload["question"] = f"咨询{i:03d}：该纠纷应如何处理？"
    answer = f"处理意见{i:03d}：建议协商解决，必要时提起诉讼。"
    if i % 4 == 1:
        answer += f"可依据《民法典》第{1000 + i}条主张权利。"
    payload["answer"] = "" if i in MISSING_ANSWER else answer
    if i in MISSING_QUESTION:
        payload.setdefault("question", "")
    return {
        "source_id": f"rec-{i:03d}",
        "source_kind": "legal_raw_text",
        "payload": payload,
    }


def make_forge_fixture() -> None:
    records = [forge_record(i) for i in range(1, 201)]
    write_jsonl(DATA / "forge_records.jsonl", records)
    schema = {
        "input_field": "question",
        "output_field": "answer",
        "task_tag": "legal_qa",
        "scenario_tag": "consultation",
    }
    (DATA / "forge_schema.json").write_text(
        json.dumps(schema, ensure_ascii=False, indent=2), encoding="utf-8"
    )

    raw = load_raw_records(DATA / "forge_records.jsonl")
    pairs, _ = clean_and_pair(raw, TaskSchema.from_file(DATA / "forge_schema.json"))
    store = TranscriptStore()
    for pair in pairs:
        idx = int(pair.source_id.split("-")[1])
        text = (BAD_SHAPE if idx in SHAPE_REJECTS else GOOD_SHAPE).format(idx=pair.source_id)
        for strict in (False, True):
            request = build_shaping_request(pair, PROFILE, MODEL, strict=strict)
            store.append(TranscriptEntry(request.request_tag, text))
    transcript_export(store, DATA / "forge_transcripts.jsonl")
    print(f"forge: {len(records)} records, {len(pairs)} cleaned pairs, "
          f"{len(store)} transcript entries")


# -------------------------------------------------------------- sundries

def make_misc_fixtures() -> None:
    corpus = [
        {
            "category": "婚姻家庭",
            "title": "婚姻家事条例",
            "body": "第一条 夫妻在婚姻关系存续期间所得的财产为共同财产。\n"
                    "第二条 离婚后，子女抚养费由不直接抚养的一方负担。\n"
                    "第三条 抚养费standard可以根据收入比例确定。",
        },
        {
            "category": "知识产权",
            "title": "著作权条例",
            "body": "第一条 著作权属于作者。\n第二条 著作权包括发表权、署名权。",
        },
        {
            "category": "刑事",
            "title": "刑事责任条例",
            "body": "第一条 正当防卫不负刑事责任。\n第二条 防卫过当应当减轻处罚。",
        },
    ]
    write_jsonl(DATA / "toy_corpus.jsonl", corpus)

    lcot_cases = [
        {"case": "被告借款五十万元逾期未还。"},
        {"case": "甲公司未按合同约定交付货物。"},
        {"case": "乙某驾车闯红灯致行人受伤。"},
        {"case": "丙未经许可转载他人文章并署名。"},
        {"case": "丁在劳动合同期内被无故辞退。"},
        {"case": "某公司股东会决议未通知小股东。"},
        {"case": "房屋买卖合同签订后卖方反悔。"},
        {"case": "遗嘱人订立遗嘱时缺乏见证人。"},
        {"case": "网购商品与宣传严重不符。"},
        {"case": "邻居装修噪音持续扰民。"},
    ]
    write_jsonl(DATA / "lcot_cases.jsonl", lcot_cases)
    print("misc: toy corpus + lcot cases")


def main() -> None:
    make_mcq_fixture()
    make_subjective_fixture()
    make_forge_fixture()
    make_misc_fixtures()


if __name__ == "__main__":
    main()
