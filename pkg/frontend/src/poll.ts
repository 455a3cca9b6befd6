/** Fixed-interval polling of evaluation runs until they reach a terminal
 * status. Timer functions are injectable for tests. */

import type { ApiClient } from "./api.js";
import type { RunDescriptor, RunStatus } from "./types.js";

export interface TimerHandle {
  stop(): void;
}

export type Scheduler = (callback: () => void, intervalMs: number) => TimerHandle;

export const intervalScheduler: Scheduler = (callback, intervalMs) => {
  const id = setInterval(callback, intervalMs);
  return { stop: () => clearInterval(id) };
};

const TERMINAL: ReadonlySet<RunStatus> = new Set(["done", "failed"]);

export function isTerminal(status: RunStatus): boolean {
  return TERMINAL.has(status);
}

/** Poll every tracked run id; invoke `onUpdate` with fresh descriptors and
 * stop automatically once every run is terminal. */
export function pollRuns(
  client: ApiClient,
  runIds: () => string[],
  onUpdate: (run: RunDescriptor) => void,
  intervalMs = 1000,
  scheduler: Scheduler = intervalScheduler,
): TimerHandle {
  const finished = new Set<string>();
  const handle = scheduler(() => {
    const pending = runIds().filter((id) => !finished.has(id));
    if (pending.length === 0) {
      handle.stop();
      return;
    }
    for (const runId of pending) {
      void client
        .getRun(runId)
        .then((run) => {
          if (isTerminal(run.status)) finished.add(run.run_id);
          onUpdate(run);
        })
        .catch(() => {
          /* transient; retried on the next tick */
        });
    }
  }, intervalMs);
  return handle;
}
