/** HTML-string renderers. Pure functions of state/payloads, so component
 * tests can assert on markup without a DOM. */

import type { ChatViewState, Turn } from "./state.js";
import { selectedCitationDetail } from "./state.js";
import type {
  Citation,
  KbHit,
  ObjectiveCell,
  ObjectiveReport,
  RunDescriptor,
  SubjectiveReport,
} from "./types.js";

export function escapeHtml(value: string): string {
  return value
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}

/** Two decimals, ties away from zero — matches the report convention. */
export function formatScore(value: number): string {
  return (Math.round(value * 100 + 1e-9) / 100).toFixed(2);
}

function renderCitationChips(turn: Turn, turnIndex: number): string {
  if (turn.citations.length === 0) return "";
  const chips = turn.citations
    .map(
      (c) =>
        `<button class="citation-chip" data-turn="${turnIndex}" data-rank="${c.rank}">` +
        `[${c.rank}] ${escapeHtml(c.title ?? c.chunk_id)}</button>`,
    )
    .join("");
  return `<div class="citations">${chips}</div>`;
}

export function renderChat(state: ChatViewState): string {
  const turns = state.turns
    .map((turn, index) => {
      const badge =
        turn.status === "error"
          ? `<span class="badge error">${escapeHtml(turn.error ?? "error")}</span>` +
            `<button class="retry" data-question="${escapeHtml(turn.question)}">重试</button>`
          : turn.status === "streaming"
            ? `<span class="badge streaming">…</span>`
            : "";
      return (
        `<section class="turn turn-${turn.status}">` +
        `<div class="question">${escapeHtml(turn.question)}</div>` +
        `<div class="answer">${escapeHtml(turn.answer)}</div>` +
        badge +
        renderCitationChips(turn, index) +
        `</section>`
      );
    })
    .join("");
  return turns || `<p class="empty">提出一个法律问题开始咨询。</p>`;
}

export function renderCitationPanel(state: ChatViewState): string {
  const detail: Citation | null = selectedCitationDetail(state);
  if (!detail) {
    return `<p class="empty">点击引用编号查看法条原文。</p>`;
  }
  const article = detail.article_no != null ? `第${detail.article_no}条` : "全文";
  return (
    `<div class="citation-detail">` +
    `<h3>[${detail.rank}] ${escapeHtml(detail.title ?? detail.chunk_id)}</h3>` +
    `<p class="meta">${escapeHtml(detail.category ?? "")} · ${article} · ` +
    `score ${formatScore(detail.score)}</p>` +
    `<pre class="chunk-text">${escapeHtml(detail.text ?? "")}</pre>` +
    `</div>`
  );
}

export function renderKbHits(hits: KbHit[]): string {
  if (hits.length === 0) return `<p class="empty">无检索结果。</p>`;
  const rows = hits
    .map(
      (h) =>
        `<tr><td>${h.rank}</td><td>${formatScore(h.score)}</td>` +
        `<td>${escapeHtml(h.category ?? "")}</td><td>${escapeHtml(h.title ?? "")}</td>` +
        `<td>${h.article_no ?? ""}</td><td>v${h.version}</td>` +
        `<td class="chunk">${escapeHtml(h.text ?? "")}</td></tr>`,
    )
    .join("");
  return (
    `<table class="kb-hits"><thead><tr><th>#</th><th>Score</th><th>Category</th>` +
    `<th>Title</th><th>Article</th><th>Version</th><th>Text</th></tr></thead>` +
    `<tbody>${rows}</tbody></table>`
  );
}

const LEVEL_ORDER: ReadonlyArray<ObjectiveCell["level"]> = ["Hard", "Normal", "Easy"];

/** Grouped accuracy table: level header row, subject row with S/M
 * sub-columns, one value row, trailing Average column. */
export function renderObjectiveTable(report: ObjectiveReport, label = "run"): string {
  const cells = report.cells;
  const subjects: { subject: string; level: string; cells: ObjectiveCell[] }[] = [];
  for (const cell of cells) {
    const existing = subjects.find((s) => s.subject === cell.subject);
    if (existing) existing.cells.push(cell);
    else subjects.push({ subject: cell.subject, level: cell.level, cells: [cell] });
  }
  const levels = LEVEL_ORDER.filter((level) => subjects.some((s) => s.level === level)).map(
    (level) => ({
      level,
      span: subjects
        .filter((s) => s.level === level)
        .reduce((n, s) => n + s.cells.length, 0),
    }),
  );
  const levelRow =
    `<tr><th rowspan="3">Run</th>` +
    levels.map((l) => `<th colspan="${l.span}">${l.level}</th>`).join("") +
    `<th rowspan="3">Average</th></tr>`;
  const subjectRow =
    `<tr>` +
    subjects.map((s) => `<th colspan="${s.cells.length}">${s.subject}</th>`).join("") +
    `</tr>`;
  const typeRow =
    `<tr>` +
    subjects
      .map((s) =>
        s.cells.map((c) => `<th>${c.answer_type === "single" ? "S" : "M"}</th>`).join(""),
      )
      .join("") +
    `</tr>`;
  const valueRow =
    `<tr><td>${escapeHtml(label)}</td>` +
    subjects
      .map((s) => s.cells.map((c) => `<td>${formatScore(c.accuracy)}</td>`).join(""))
      .join("") +
    `<td>${formatScore(report.micro_average)}</td></tr>`;
  const footnote =
    report.n_errors > 0
      ? `<p class="footnote">errors: ${report.n_errors} item(s) scored incorrect after failures</p>`
      : "";
  return (
    `<table class="objective-report"><thead>${levelRow}${subjectRow}${typeRow}</thead>` +
    `<tbody>${valueRow}</tbody></table>` +
    footnote
  );
}

/** ACC / CPL / CLR / Average columns with an exclusion footnote. */
export function renderSubjectiveTable(report: SubjectiveReport, label = "run"): string {
  const footnote =
    report.n_invalid > 0
      ? `<p class="footnote">excluded: ${report.n_invalid} item(s) with unparseable judgments</p>`
      : "";
  return (
    `<table class="subjective-report"><thead>` +
    `<tr><th>Run</th><th>ACC</th><th>CPL</th><th>CLR</th><th>Average</th></tr></thead>` +
    `<tbody><tr><td>${escapeHtml(label)}</td>` +
    `<td>${formatScore(report.mean_acc)}</td>` +
    `<td>${formatScore(report.mean_cpl)}</td>` +
    `<td>${formatScore(report.mean_clr)}</td>` +
    `<td>${formatScore(report.average)}</td></tr></tbody></table>` +
    footnote
  );
}

export function renderRunList(runs: RunDescriptor[]): string {
  if (runs.length === 0) {
    return `<p class="empty">尚无评测运行。提交一个评测以查看进度与报告。</p>`;
  }
  const rows = runs
    .map(
      (r) =>
        `<tr class="run-${r.status}" data-run="${escapeHtml(r.run_id)}">` +
        `<td>${escapeHtml(r.run_id)}</td><td>${r.kind}</td><td>${r.status}</td>` +
        `<td>${r.error ? escapeHtml(r.error) : ""}</td></tr>`,
    )
    .join("");
  return (
    `<table class="run-list"><thead><tr><th>Run</th><th>Kind</th><th>Status</th>` +
    `<th>Error</th></tr></thead><tbody>${rows}</tbody></table>`
  );
}

export function renderRunReport(run: RunDescriptor): string {
  if (run.status !== "done" || !run.report) return "";
  if (run.kind === "objective") {
    return renderObjectiveTable(run.report as ObjectiveReport, run.run_id);
  }
  return renderSubjectiveTable(run.report as SubjectiveReport, run.run_id);
}
