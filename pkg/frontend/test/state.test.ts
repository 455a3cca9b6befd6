import { describe, expect, it } from "vitest";

import {
  applyEvent,
  beginTurn,
  canSend,
  initialChatState,
  retryableQuestion,
  selectCitation,
  selectedCitationDetail,
  type ChatViewState,
} from "../src/state.js";
import { renderChat } from "../src/render.js";
import type { Citation, ConsultEvent } from "../src/types.js";

function citation(rank: number, title = `法条${rank}`): Citation {
  return {
    chunk_id: `doc-0000${rank}:v1:c000`,
    rank,
    score: 5 - rank,
    title,
    category: "测试",
    article_no: rank,
    text: `第${rank}条 内容。`,
  };
}

function runStream(deltas: string[], citations: Citation[] = []): ChatViewState {
  let state = beginTurn(initialChatState(), "问题");
  for (const text of deltas) {
    state = applyEvent(state, { type: "delta", text });
  }
  return applyEvent(state, { type: "final", citations, trace_id: "t-1" });
}

describe("stream integrity", () => {
  it("renders AB then C as ABC", () => {
    const state = runStream(["AB", "C"]);
    expect(state.turns[0]!.answer).toBe("ABC");
    expect(renderChat(state)).toContain("ABC");
  });

  const SCRIPTED_STREAMS: string[][] = [
    ["AB", "C"],
    ["一段", "二段", "三段"],
    [""],
    ["единственный кусок"],
    ["大前提：……\n", "小前提：……\n", "结论：……"],
    ["a", "b", "c", "d", "e", "f", "g"],
    ["🙂", "⚖️", "法"],
    ["long ".repeat(40), "tail"],
    ["<b>not html</b>", " & more"],
    ["answer with \n newlines \n inside"],
  ];

  it.each(SCRIPTED_STREAMS.map((deltas, index) => [index, deltas] as const))(
    "scripted stream %d: rendered answer equals delta concatenation",
    (_index, deltas) => {
      const state = runStream(deltas);
      expect(state.turns[0]!.answer).toBe(deltas.join(""));
      expect(state.pendingStream).toBe(false);
    },
  );
});

describe("single active stream", () => {
  it("blocks a second send while streaming", () => {
    const state = beginTurn(initialChatState(), "第一问");
    expect(canSend(state, "第二问")).toBe(false);
    expect(() => beginTurn(state, "第二问")).toThrow();
  });

  it("re-enables input after the final event", () => {
    const state = runStream(["好的"]);
    expect(canSend(state, "后续问题")).toBe(true);
  });

  it("empty input disables send", () => {
    expect(canSend(initialChatState(), "   ")).toBe(false);
    expect(canSend(initialChatState(), "有内容")).toBe(true);
  });
});

describe("error handling", () => {
  it("keeps partial text and marks the turn on a mid-stream error", () => {
    let state = beginTurn(initialChatState(), "问题");
    state = applyEvent(state, { type: "delta", text: "部分回答" });
    state = applyEvent(state, {
      type: "error",
      code: "replay_miss",
      message: "no transcript",
    } as ConsultEvent);
    const turn = state.turns[0]!;
    expect(turn.answer).toBe("部分回答");
    expect(turn.status).toBe("error");
    expect(state.pendingStream).toBe(false);
    const html = renderChat(state);
    expect(html).toContain("部分回答");
    expect(html).toContain("badge error");
    expect(html).toContain("replay_miss");
  });

  it("offers the failed question for retry", () => {
    let state = beginTurn(initialChatState(), "重试我");
    state = applyEvent(state, { type: "error", code: "x", message: "y" });
    expect(retryableQuestion(state)).toBe("重试我");
    expect(renderChat(state)).toContain('class="retry"');
  });
});

describe("citations", () => {
  it("stores citations in rank order even when the payload is shuffled", () => {
    const state = runStream(["答"], [citation(3), citation(1), citation(2)]);
    expect(state.turns[0]!.citations.map((c) => c.rank)).toEqual([1, 2, 3]);
  });

  it("selecting a citation exposes its payload fields", () => {
    let state = runStream(["答"], [citation(1), citation(2)]);
    state = selectCitation(state, 0, 2);
    const detail = selectedCitationDetail(state);
    expect(detail?.title).toBe("法条2");
    expect(detail?.article_no).toBe(2);
    expect(detail?.score).toBe(3);
  });

  it("selecting an unknown rank clears the selection", () => {
    let state = runStream(["答"], [citation(1)]);
    state = selectCitation(state, 0, 9);
    expect(selectedCitationDetail(state)).toBeNull();
  });
});
