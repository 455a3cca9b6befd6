#!/usr/bin/env python3
"""Write the labeled answer-extraction corpus
(tests/data/extraction_corpus.jsonl).

Each case is a model-output string with the letter set and rule the frozen
three-rule grammar must produce. The labels were worked out by hand from the
grammar definition; they freeze its behavior, including the word-boundary
refinement of the fallback scan ("IDK" and the A of "Answer" extract
nothing).
"""

from __future__ import annotations

import json
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "tests" / "data" / "extraction_corpus.jsonl"

ABCD = ["A", "B", "C", "D"]
ABCDE = ["A", "B", "C", "D", "E"]
AB = ["A", "B"]

# (response, options, expected letters, expected rule)
CASES: list[tuple[str, list[str], list[str], str]] = [
    # --- rule 1: explicit answer marker, Chinese ---
    ("经分析，正确答案是B。", ABCD, ["B"], "explicit_answer"),
    ("答案：A", ABCD, ["A"], "explicit_answer"),
    ("答案为C。", ABCD, ["C"], "explicit_answer"),
    ("答案:D", ABCD, ["D"], "explicit_answer"),
    ("综上所述，答案是A、C。", ABCD, ["A", "C"], "explicit_answer"),
    ("答案是：B", ABCD, ["B"], "explicit_answer"),
    ("我认为答案为AB，理由如下：选项A与B均符合规定。", ABCD, ["A", "B"], "explicit_answer"),
    ("答案是（C）", ABCD, ["C"], "explicit_answer"),
    ("首先排除A项，其次排除B项，最终答案是D。", ABCD, ["D"], "explicit_answer"),
    ("【解析】本题考查盗窃罪。故本题答案是BD。", ABCD, ["B", "D"], "explicit_answer"),
    ("答案 是 C", ABCD, ["C"], "explicit_answer"),
    ("答案为 B 和 C", ABCD, ["B", "C"], "explicit_answer"),
    ("答案是D；理由：侵权行为构成要件齐备。", ABCD, ["D"], "explicit_answer"),
    ("答案：ABCD都不对吗？不，恰恰都对。", ABCD, ["A", "B", "C", "D"], "explicit_answer"),
    ("题目解析完毕。\n答案：\nB", ABCD, ["B"], "explicit_answer"),
    ("正确答案是B。另外有人主张答案为C，但不成立。", ABCD, ["B"], "explicit_answer"),
    ("A项正确吗？不。答案是E。", ABCDE, ["E"], "explicit_answer"),
    # --- rule 1: English markers ---
    ("The answer is D.", ABCD, ["D"], "explicit_answer"),
    ("Answer: B", ABCD, ["B"], "explicit_answer"),
    ("the answer is a", ABCD, ["A"], "explicit_answer"),
    ("Answer: C, D", ABCD, ["C", "D"], "explicit_answer"),
    ("my answer is b, c and d", ABCD, ["B", "C", "D"], "explicit_answer"),
    ("After weighing the options, the answer is A or C.", ABCD, ["A", "C"], "explicit_answer"),
    ("The correct answer is A.", ABCD, ["A"], "explicit_answer"),
    # --- rule 1 marker present but yields nothing -> later rules or none ---
    ("答案：无。", ABCD, [], "none"),
    ("答案是E。", ABCD, [], "none"),
    ("Answer: it depends on jurisdiction.", ABCD, [], "none"),
    ("答案是乙，即选项B对应的内容。", ABCD, ["B"], "fallback_scan"),
    # --- rule 2: standalone letter lines ---
    ("逐项分析见上。\nAC", ABCD, ["A", "C"], "standalone_letters"),
    ("推理过程略。\nA, C", ABCD, ["A", "C"], "standalone_letters"),
    ("结论如下：\nabd", ABCD, ["A", "B", "D"], "standalone_letters"),
    ("最终选择如下：\nB、D", ABCD, ["B", "D"], "standalone_letters"),
    ("（以下为作答）\nA C D", ABCD, ["A", "C", "D"], "standalone_letters"),
    ("b", ABCD, ["B"], "standalone_letters"),
    ("ABCD", ABCD, ["A", "B", "C", "D"], "standalone_letters"),
    ("第一行没有字母。\nd\n后面还有解释。", ABCD, ["D"], "standalone_letters"),
    # --- rule 1 beats earlier standalone line ---
    ("A\n答案是B", ABCD, ["B"], "explicit_answer"),
    # --- rule 3: fallback scan (uppercase only) ---
    ("I would pick option D because it matches the statute.", ABCD, ["D"], "fallback_scan"),
    ("选项BD符合题意。", ABCD, ["B", "D"], "fallback_scan"),
    ("应当选择C。", ABCD, ["C"], "fallback_scan"),
    ("结合案情，AC两项均正确。", ABCD, ["A", "C"], "fallback_scan"),
    ("D选项描述的情形与题干一致。", ABCD, ["D"], "fallback_scan"),
    ("Options B and C are both defensible, but B is stronger.", ABCD, ["B"], "fallback_scan"),
    ("both A and B seem right to me", ABCD, ["A"], "fallback_scan"),
    ("答案可能是A，也可能不是。", ABCD, ["A"], "fallback_scan"),
    ("正确选项为A。", ABCD, ["A"], "fallback_scan"),
    ("应选 B。", ABCD, ["B"], "fallback_scan"),
    ("IDK", ABCD, [], "none"),
    ("选B！", AB, ["B"], "fallback_scan"),
    # --- none: no rule fires ---
    ("无法确定。", ABCD, [], "none"),
    ("这道题超出了我的知识范围。", ABCD, [], "none"),
    ("题目信息不足，难以判断。", ABCD, [], "none"),
    ("", ABCD, [], "none"),
    ("需要更多上下文才能作答。", ABCD, [], "none"),
    ("1064", ABCD, [], "none"),
    ("судья не согласен", ABCD, [], "none"),
    ("答案是Ｂ", ABCD, [], "none"),
    ("Neither option convinces me.", ABCD, [], "none"),
    ("答案是C吗？", AB, [], "none"),
]


def main() -> None:
    assert len(CASES) >= 50, f"corpus must hold at least 50 cases, got {len(CASES)}"
    OUT.parent.mkdir(parents=True, exist_ok=True)
    with OUT.open("w", encoding="utf-8") as fh:
        for i, (response, options, letters, rule) in enumerate(CASES, start=1):
            fh.write(
                json.dumps(
                    {
                        "id": f"ext-{i:03d}",
                        "response": response,
                        "options": options,
                        "letters": sorted(letters),
                        "rule": rule,
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )
    print(f"wrote {len(CASES)} cases to {OUT}")


if __name__ == "__main__":
    main()
