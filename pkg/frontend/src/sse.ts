/** Server-sent-event parsing for the consult stream. Bytes may arrive in
 * arbitrary fragments; events are delimited by a blank line and carried in
 * `data:` fields. */

import type { ConsultEvent } from "./types.js";

export interface SseParse {
  events: ConsultEvent[];
  rest: string;
}

/** Extract complete events from `buffer`, returning unconsumed trailing
 * bytes (a partial event) in `rest`. */
export function parseSseBuffer(buffer: string): SseParse {
  const events: ConsultEvent[] = [];
  let rest = buffer;
  for (;;) {
    const boundary = rest.indexOf("\n\n");
    if (boundary < 0) break;
    const block = rest.slice(0, boundary);
    rest = rest.slice(boundary + 2);
    const data = block
      .split("\n")
      .filter((line) => line.startsWith("data:"))
      .map((line) => line.slice(5).trimStart())
      .join("\n");
    if (data) {
      events.push(JSON.parse(data) as ConsultEvent);
    }
  }
  return { events, rest };
}

/** Drive a chunked text stream through the parser, invoking `onEvent` for
 * every complete event in order. */
export async function consumeSse(
  chunks: AsyncIterable<string>,
  onEvent: (event: ConsultEvent) => void,
): Promise<void> {
  let buffer = "";
  for await (const chunk of chunks) {
    buffer += chunk;
    const { events, rest } = parseSseBuffer(buffer);
    buffer = rest;
    for (const event of events) onEvent(event);
  }
  const { events } = parseSseBuffer(buffer + "\n\n");
  for (const event of events) onEvent(event);
}
