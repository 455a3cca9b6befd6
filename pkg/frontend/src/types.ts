/** Wire types for the /v1 API surface. The UI is a pure client: every
 * displayed number originates from one of these payloads. */

export interface Citation {
  chunk_id: string;
  score: number;
  rank: number;
  text?: string;
  category?: string;
  title?: string;
  article_no?: number | null;
}

export interface KbHit extends Citation {
  doc_id: string;
  version: number;
}

export type ConsultEvent =
  | { type: "delta"; text: string }
  | { type: "final"; citations: Citation[]; trace_id: string }
  | { type: "error"; code: string; message: string };

export type RunStatus = "queued" | "running" | "done" | "failed";

export interface ObjectiveCell {
  subject: string;
  level: "Hard" | "Normal" | "Easy";
  answer_type: "single" | "multi";
  correct: number;
  total: number;
  accuracy: number;
}

export interface ObjectiveReport {
  cells: ObjectiveCell[];
  levels: Record<string, { correct: number; total: number; accuracy: number }>;
  micro_average: number;
  n_items: number;
  n_errors: number;
}

export interface SubjectiveReport {
  mean_acc: number;
  mean_cpl: number;
  mean_clr: number;
  average: number;
  n_items: number;
  n_invalid: number;
  per_scenario?: Record<
    string,
    { n: number; accuracy: number; completeness: number; clarity: number }
  >;
}

export interface RunDescriptor {
  run_id: string;
  kind: "objective" | "subjective";
  status: RunStatus;
  report_ref: string | null;
  error?: string | null;
  report?: ObjectiveReport | SubjectiveReport;
}

export interface HealthPayload {
  status: "ok" | "degraded";
  index_size: number;
}
