/** Typed client for the /v1 surface. `fetchImpl` is injectable so tests
 * run against scripted responses. */

import { consumeSse } from "./sse.js";
import type {
  ConsultEvent,
  HealthPayload,
  KbHit,
  RunDescriptor,
} from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

async function expectOk(response: Response): Promise<Response> {
  if (!response.ok) {
    let message = `${response.status}`;
    try {
      const body = (await response.json()) as { code?: string; message?: string };
      message = `${body.code ?? response.status}: ${body.message ?? ""}`;
    } catch {
      /* non-JSON error body */
    }
    throw new Error(message);
  }
  return response;
}

async function* iterateBody(response: Response): AsyncIterable<string> {
  const body = response.body;
  if (!body) {
    yield await response.text();
    return;
  }
  const reader = body.getReader();
  const decoder = new TextDecoder();
  for (;;) {
    const { done, value } = await reader.read();
    if (done) break;
    yield decoder.decode(value, { stream: true });
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private url(path: string): string {
    return `${this.baseUrl}${path}`;
  }

  async health(): Promise<HealthPayload> {
    const response = await expectOk(await this.fetchImpl(this.url("/healthz")));
    return (await response.json()) as HealthPayload;
  }

  async kbSearch(query: string, k: number): Promise<KbHit[]> {
    const params = new URLSearchParams({ q: query, k: String(k) });
    const response = await expectOk(
      await this.fetchImpl(this.url(`/v1/kb/search?${params}`)),
    );
    const body = (await response.json()) as { hits: KbHit[] };
    return body.hits;
  }

  async upsertDocument(doc: {
    category: string;
    title: string;
    body: string;
    effective_date?: string;
  }): Promise<{ doc_id: string; version: number }> {
    const response = await expectOk(
      await this.fetchImpl(this.url("/v1/kb/documents"), {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(doc),
      }),
    );
    return (await response.json()) as { doc_id: string; version: number };
  }

  /** Stream a consult answer; events arrive in order through `onEvent`. */
  async consult(
    query: string,
    onEvent: (event: ConsultEvent) => void,
    k?: number,
  ): Promise<void> {
    const response = await this.fetchImpl(this.url("/v1/consult"), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(k == null ? { query } : { query, k }),
    });
    if (!response.ok) {
      let code = String(response.status);
      let message = response.statusText;
      try {
        const body = (await response.json()) as { code?: string; message?: string };
        code = body.code ?? code;
        message = body.message ?? message;
      } catch {
        /* keep defaults */
      }
      onEvent({ type: "error", code, message });
      return;
    }
    await consumeSse(iterateBody(response), onEvent);
  }

  async submitRun(
    kind: "objective" | "subjective",
    body: Record<string, unknown>,
  ): Promise<RunDescriptor> {
    const response = await expectOk(
      await this.fetchImpl(this.url(`/v1/eval/${kind}/runs`), {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(body),
      }),
    );
    return (await response.json()) as RunDescriptor;
  }

  async getRun(runId: string): Promise<RunDescriptor> {
    const response = await expectOk(
      await this.fetchImpl(this.url(`/v1/eval/runs/${encodeURIComponent(runId)}`)),
    );
    return (await response.json()) as RunDescriptor;
  }
}
