import { describe, expect, it } from "vitest";

import {
  formatScore,
  renderChat,
  renderCitationPanel,
  renderKbHits,
  renderObjectiveTable,
  renderRunList,
  renderSubjectiveTable,
} from "../src/render.js";
import {
  applyEvent,
  beginTurn,
  initialChatState,
  selectCitation,
} from "../src/state.js";
import { MOCK_OBJECTIVE_REPORT, MOCK_SUBJECTIVE_REPORT } from "../src/mock.js";
import type { ObjectiveReport } from "../src/types.js";

describe("formatScore", () => {
  it("renders two decimals, half up", () => {
    expect(formatScore(10 / 3)).toBe("3.33");
    expect(formatScore(66.666667)).toBe("66.67");
    expect(formatScore(3.465)).toBe("3.47");
    expect(formatScore(37.1)).toBe("37.10");
  });
});

// the strongest published row of the objective benchmark, as a report payload
const PUBLISHED_ROW: ObjectiveReport = {
  cells: [
    { subject: "NJE", level: "Hard", answer_type: "single", correct: 226, total: 537, accuracy: 42.09 },
    { subject: "NJE", level: "Hard", answer_type: "multi", correct: 92, total: 463, accuracy: 19.87 },
    { subject: "PAE", level: "Hard", answer_type: "single", correct: 48, total: 118, accuracy: 40.68 },
    { subject: "PAE", level: "Hard", answer_type: "multi", correct: 51, total: 276, accuracy: 18.48 },
    { subject: "CPA", level: "Hard", answer_type: "single", correct: 78, total: 197, accuracy: 39.59 },
    { subject: "CPA", level: "Hard", answer_type: "multi", correct: 23, total: 120, accuracy: 19.17 },
    { subject: "UNGEE", level: "Normal", answer_type: "single", correct: 163, total: 320, accuracy: 50.94 },
    { subject: "UNGEE", level: "Normal", answer_type: "multi", correct: 22, total: 87, accuracy: 25.29 },
    { subject: "PFE", level: "Easy", answer_type: "single", correct: 97, total: 170, accuracy: 57.06 },
    { subject: "LBK", level: "Easy", answer_type: "single", correct: 151, total: 275, accuracy: 54.91 },
  ],
  levels: {},
  micro_average: 37.1065,
  n_items: 2563,
  n_errors: 0,
};

describe("objective report table (grouped benchmark layout)", () => {
  const html = renderObjectiveTable(PUBLISHED_ROW, "strongest");

  it("groups subjects under Hard/Normal/Easy with correct spans", () => {
    expect(html).toContain('<th colspan="6">Hard</th>');
    expect(html).toContain('<th colspan="2">Normal</th>');
    expect(html).toContain('<th colspan="2">Easy</th>');
  });

  it("has S/M sub-columns per subject and a trailing Average", () => {
    expect(html).toContain('<th colspan="2">NJE</th>');
    expect(html).toContain('<th colspan="1">PFE</th>');
    expect((html.match(/<th>S<\/th>/g) ?? []).length).toBe(6);
    expect((html.match(/<th>M<\/th>/g) ?? []).length).toBe(4);
    expect(html).toContain('<th rowspan="3">Average</th>');
  });

  it("renders the cell values and micro-average to two decimals", () => {
    for (const value of ["42.09", "19.87", "40.68", "18.48", "39.59", "19.17",
                         "50.94", "25.29", "57.06", "54.91", "37.11"]) {
      expect(html).toContain(`<td>${value}</td>`);
    }
    const valueOrder = [...html.matchAll(/<td>([\d.]+)<\/td>/g)].map((m) => m[1]);
    expect(valueOrder).toEqual([
      "42.09", "19.87", "40.68", "18.48", "39.59", "19.17",
      "50.94", "25.29", "57.06", "54.91", "37.11",
    ]);
  });

  it("renders the 24-item fixture report", () => {
    const fixture = renderObjectiveTable(MOCK_OBJECTIVE_REPORT, "fixture");
    expect(fixture).toContain("66.67");
    expect(fixture).toContain('<th colspan="6">Hard</th>');
  });
});

describe("subjective report table (ACC/CPL/CLR/Average layout)", () => {
  it("renders the published strongest row", () => {
    const html = renderSubjectiveTable(
      { mean_acc: 3.46, mean_cpl: 3.12, mean_clr: 3.59, average: 3.39, n_items: 300, n_invalid: 0 },
      "strongest",
    );
    expect(html).toContain("<th>ACC</th><th>CPL</th><th>CLR</th><th>Average</th>");
    expect(html).toContain("<td>3.46</td><td>3.12</td><td>3.59</td><td>3.39</td>");
    expect(html).not.toContain("excluded");
  });

  it("footnotes exclusions", () => {
    const html = renderSubjectiveTable(MOCK_SUBJECTIVE_REPORT);
    expect(html).toContain("<td>3.40</td><td>3.60</td><td>3.60</td><td>3.53</td>");
    expect(html).toContain("excluded: 1 item(s)");
  });
});

describe("citation panel", () => {
  function stateWithCitations() {
    let state = beginTurn(initialChatState(), "问");
    state = applyEvent(state, { type: "delta", text: "答" });
    return applyEvent(state, {
      type: "final",
      trace_id: "t-1",
      citations: [
        { chunk_id: "c2", rank: 2, score: 1.5, title: "乙法", category: "类", article_no: 7, text: "第七条 乙。" },
        { chunk_id: "c1", rank: 1, score: 3.25, title: "甲法", category: "类", article_no: 1, text: "第一条 甲。" },
      ],
    });
  }

  it("lists citation chips in rank order", () => {
    const html = renderChat(stateWithCitations());
    const ranks = [...html.matchAll(/data-rank="(\d+)"/g)].map((m) => Number(m[1]));
    expect(ranks).toEqual([1, 2]);
  });

  it("shows chunk text, title, article and score for the selection", () => {
    const state = selectCitation(stateWithCitations(), 0, 2);
    const html = renderCitationPanel(state);
    expect(html).toContain("乙法");
    expect(html).toContain("第7条");
    expect(html).toContain("score 1.50");
    expect(html).toContain("第七条 乙。");
  });

  it("empty state prompts for a selection", () => {
    expect(renderCitationPanel(initialChatState())).toContain("点击引用编号");
  });
});

describe("run list", () => {
  it("empty state message when no runs exist", () => {
    expect(renderRunList([])).toContain("尚无评测运行");
  });

  it("lists runs with status", () => {
    const html = renderRunList([
      { run_id: "obj-1", kind: "objective", status: "running", report_ref: null },
      { run_id: "subj-2", kind: "subjective", status: "done", report_ref: "x" },
    ]);
    expect(html).toContain("obj-1");
    expect(html).toContain("running");
    expect(html).toContain("subj-2");
  });
});

describe("kb hits", () => {
  it("renders rows with scores and versions", () => {
    const html = renderKbHits([
      {
        chunk_id: "d:v2:c0", doc_id: "d", version: 2, rank: 1, score: 4.0,
        category: "婚姻家庭", title: "婚姻家事条例", article_no: 2, text: "第二条 内容。",
      },
    ]);
    expect(html).toContain("婚姻家事条例");
    expect(html).toContain("v2");
    expect(html).toContain("4.00");
  });
});
