/** Offline scripted API for demos and component tests (?mock=1). */

import type { ApiClient } from "./api.js";
import type {
  Citation,
  ConsultEvent,
  HealthPayload,
  KbHit,
  ObjectiveReport,
  RunDescriptor,
  SubjectiveReport,
} from "./types.js";

const MOCK_HITS: KbHit[] = [
  {
    chunk_id: "doc-00001:v1:c001",
    doc_id: "doc-00001",
    version: 1,
    rank: 1,
    score: 4.9861,
    category: "婚姻家庭",
    title: "婚姻家事条例",
    article_no: 2,
    text: "第二条 离婚后，子女抚养费由不直接抚养的一方负担。",
  },
  {
    chunk_id: "doc-00001:v1:c000",
    doc_id: "doc-00001",
    version: 1,
    rank: 2,
    score: 1.2034,
    category: "婚姻家庭",
    title: "婚姻家事条例",
    article_no: 1,
    text: "第一条 夫妻在婚姻关系存续期间所得的财产为共同财产。",
  },
];

const MOCK_ANSWER =
  "大前提：相关条文规定，离婚后子女抚养费由不直接抚养的一方负担 [1]。\n" +
  "小前提：您已离婚且子女随对方共同生活。\n" +
  "结论：您作为不直接抚养的一方应当负担抚养费。";

export const MOCK_OBJECTIVE_REPORT: ObjectiveReport = {
  cells: [
    { subject: "NJE", level: "Hard", answer_type: "single", correct: 2, total: 3, accuracy: 66.666667 },
    { subject: "NJE", level: "Hard", answer_type: "multi", correct: 2, total: 3, accuracy: 66.666667 },
    { subject: "PAE", level: "Hard", answer_type: "single", correct: 1, total: 2, accuracy: 50 },
    { subject: "PAE", level: "Hard", answer_type: "multi", correct: 1, total: 2, accuracy: 50 },
    { subject: "CPA", level: "Hard", answer_type: "single", correct: 1, total: 2, accuracy: 50 },
    { subject: "CPA", level: "Hard", answer_type: "multi", correct: 2, total: 2, accuracy: 100 },
    { subject: "UNGEE", level: "Normal", answer_type: "single", correct: 2, total: 3, accuracy: 66.666667 },
    { subject: "UNGEE", level: "Normal", answer_type: "multi", correct: 1, total: 1, accuracy: 100 },
    { subject: "PFE", level: "Easy", answer_type: "single", correct: 2, total: 3, accuracy: 66.666667 },
    { subject: "LBK", level: "Easy", answer_type: "single", correct: 2, total: 3, accuracy: 66.666667 },
  ],
  levels: {
    Hard: { correct: 9, total: 14, accuracy: 64.285714 },
    Normal: { correct: 3, total: 4, accuracy: 75 },
    Easy: { correct: 4, total: 6, accuracy: 66.666667 },
  },
  micro_average: 66.666667,
  n_items: 24,
  n_errors: 0,
};

export const MOCK_SUBJECTIVE_REPORT: SubjectiveReport = {
  mean_acc: 3.4,
  mean_cpl: 3.6,
  mean_clr: 3.6,
  average: 3.533333,
  n_items: 5,
  n_invalid: 1,
};

export class MockApi implements Pick<
  ApiClient,
  "health" | "kbSearch" | "upsertDocument" | "consult" | "submitRun" | "getRun"
> {
  private runs = new Map<string, RunDescriptor>();
  private counter = 0;

  async health(): Promise<HealthPayload> {
    return { status: "ok", index_size: MOCK_HITS.length };
  }

  async kbSearch(query: string, k: number): Promise<KbHit[]> {
    void query;
    return MOCK_HITS.slice(0, k);
  }

  async upsertDocument(): Promise<{ doc_id: string; version: number }> {
    return { doc_id: "doc-00001", version: 2 };
  }

  async consult(
    query: string,
    onEvent: (event: ConsultEvent) => void,
  ): Promise<void> {
    void query;
    const citations: Citation[] = MOCK_HITS.map(({ ...hit }) => hit);
    for (let i = 0; i < MOCK_ANSWER.length; i += 24) {
      onEvent({ type: "delta", text: MOCK_ANSWER.slice(i, i + 24) });
      await new Promise((resolve) => setTimeout(resolve, 30));
    }
    onEvent({ type: "final", citations, trace_id: "t-mock" });
  }

  async submitRun(
    kind: "objective" | "subjective",
  ): Promise<RunDescriptor> {
    this.counter += 1;
    const runId = `${kind}-mock-${this.counter}`;
    const descriptor: RunDescriptor = {
      run_id: runId,
      kind,
      status: "running",
      report_ref: null,
    };
    this.runs.set(runId, descriptor);
    setTimeout(() => {
      this.runs.set(runId, {
        ...descriptor,
        status: "done",
        report_ref: `${runId}.report.json`,
        report: kind === "objective" ? MOCK_OBJECTIVE_REPORT : MOCK_SUBJECTIVE_REPORT,
      });
    }, 400);
    return descriptor;
  }

  async getRun(runId: string): Promise<RunDescriptor> {
    const run = this.runs.get(runId);
    if (!run) throw new Error(`unknown_run: ${runId}`);
    return run;
  }
}
