/** SPA bootstrap: three views (Consult, Knowledge Base, Evaluations) over
 * the /v1 API, hash-routed. `?mock=1` swaps in the scripted offline API. */

import { ApiClient } from "./api.js";
import { MockApi } from "./mock.js";
import { pollRuns } from "./poll.js";
import {
  renderChat,
  renderCitationPanel,
  renderKbHits,
  renderRunList,
  renderRunReport,
  escapeHtml,
} from "./render.js";
import {
  applyEvent,
  beginTurn,
  canSend,
  initialChatState,
  selectCitation,
  type ChatViewState,
} from "./state.js";
import type { RunDescriptor } from "./types.js";

type Api = Pick<
  ApiClient,
  "health" | "kbSearch" | "upsertDocument" | "consult" | "submitRun" | "getRun"
>;

const params = new URLSearchParams(window.location.search);
const api: Api = params.get("mock")
  ? new MockApi()
  : new ApiClient(params.get("api") ?? "");

let chatState: ChatViewState = initialChatState();
const runs = new Map<string, RunDescriptor>();
let poller: { stop(): void } | null = null;

function el<T extends HTMLElement = HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

// ------------------------------------------------------------- consult

function redrawChat(): void {
  el("chat-log").innerHTML = renderChat(chatState);
  el("citation-panel").innerHTML = renderCitationPanel(chatState);
  const input = el<HTMLInputElement>("chat-input");
  el<HTMLButtonElement>("chat-send").disabled = !canSend(chatState, input.value);
}

async function sendQuestion(question: string): Promise<void> {
  chatState = beginTurn(chatState, question);
  redrawChat();
  await api.consult(question, (event) => {
    chatState = applyEvent(chatState, event);
    redrawChat();
  });
  redrawChat();
}

function wireConsult(): void {
  const input = el<HTMLInputElement>("chat-input");
  input.addEventListener("input", () => {
    el<HTMLButtonElement>("chat-send").disabled = !canSend(chatState, input.value);
  });
  el("chat-form").addEventListener("submit", (event) => {
    event.preventDefault();
    if (!canSend(chatState, input.value)) return;
    const question = input.value;
    input.value = "";
    void sendQuestion(question);
  });
  el("chat-log").addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    const chip = target.closest<HTMLElement>(".citation-chip");
    if (chip) {
      chatState = selectCitation(
        chatState,
        Number(chip.dataset.turn),
        Number(chip.dataset.rank),
      );
      redrawChat();
      return;
    }
    const retry = target.closest<HTMLElement>(".retry");
    if (retry && !chatState.pendingStream) {
      void sendQuestion(retry.dataset.question ?? "");
    }
  });
}

// ---------------------------------------------------------------- kb

function wireKb(): void {
  el("kb-search-form").addEventListener("submit", async (event) => {
    event.preventDefault();
    const query = el<HTMLInputElement>("kb-query").value.trim();
    if (!query) return;
    try {
      const hits = await api.kbSearch(query, 5);
      el("kb-results").innerHTML = renderKbHits(hits);
    } catch (error) {
      toast(String(error));
    }
  });
  el("kb-upsert-form").addEventListener("submit", async (event) => {
    event.preventDefault();
    try {
      const result = await api.upsertDocument({
        category: el<HTMLInputElement>("kb-category").value,
        title: el<HTMLInputElement>("kb-title").value,
        body: el<HTMLTextAreaElement>("kb-body").value,
      });
      toast(`已写入 ${result.doc_id} v${result.version}`);
    } catch (error) {
      toast(String(error));
    }
  });
}

// -------------------------------------------------------------- evals

function redrawRuns(): void {
  const ordered = [...runs.values()].sort((a, b) => a.run_id.localeCompare(b.run_id));
  el("run-list").innerHTML = renderRunList(ordered);
  el("run-reports").innerHTML = ordered
    .map((run) => renderRunReport(run))
    .filter(Boolean)
    .join("<hr>");
}

function trackRun(descriptor: RunDescriptor): void {
  runs.set(descriptor.run_id, descriptor);
  redrawRuns();
  poller?.stop();
  poller = pollRuns(
    api as ApiClient,
    () => [...runs.keys()],
    (run) => {
      runs.set(run.run_id, run);
      redrawRuns();
    },
    1000,
  );
}

function wireEvals(): void {
  el("eval-obj-form").addEventListener("submit", async (event) => {
    event.preventDefault();
    try {
      trackRun(
        await api.submitRun("objective", {
          dataset: el<HTMLInputElement>("obj-dataset").value,
          pool: el<HTMLInputElement>("obj-pool").value,
        }),
      );
    } catch (error) {
      toast(String(error));
    }
  });
  el("eval-subj-form").addEventListener("submit", async (event) => {
    event.preventDefault();
    try {
      trackRun(
        await api.submitRun("subjective", {
          dataset: el<HTMLInputElement>("subj-dataset").value,
        }),
      );
    } catch (error) {
      toast(String(error));
    }
  });
}

// ------------------------------------------------------------ chrome

function toast(message: string): void {
  const node = el("toast");
  node.textContent = message;
  node.classList.add("visible");
  setTimeout(() => node.classList.remove("visible"), 3000);
}

const VIEWS = ["consult", "kb", "evals"] as const;

function route(): void {
  const view = window.location.hash.replace("#/", "") || "consult";
  for (const name of VIEWS) {
    el(`view-${name}`).hidden = name !== view;
    el(`nav-${name}`).classList.toggle("active", name === view);
  }
}

async function showHealth(): Promise<void> {
  try {
    const health = await api.health();
    el("health").innerHTML =
      `${health.status} · ${health.index_size} chunk(s)` +
      (health.status === "degraded" ? " — <em>知识库为空</em>" : "");
  } catch (error) {
    el("health").textContent = `服务不可用: ${escapeHtml(String(error))}`;
  }
}

window.addEventListener("hashchange", route);
window.addEventListener("DOMContentLoaded", () => {
  wireConsult();
  wireKb();
  wireEvals();
  route();
  redrawChat();
  redrawRuns();
  void showHealth();
});
