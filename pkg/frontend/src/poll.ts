import type { ApiClient } from "./api.js";
import type { RunState } from "./types.js";

export interface PollOptions {
  intervalMs?: number;
  timeoutMs?: number;
  sleep?: (ms: number) => Promise<void>;
}

const defaultSleep = (ms: number) => new Promise<void>((resolve) => setTimeout(resolve, ms));

/**
 * Poll a run until it reaches a terminal state. One request is in
 * flight at a time; the next poll starts only after the previous
 * response lands.
 */
export async function pollRun(client: ApiClient, runId: string, options: PollOptions = {}): Promise<RunState> {
  const { intervalMs = 1000, timeoutMs = 120_000, sleep = defaultSleep } = options;
  const deadline = Date.now() + timeoutMs;

  for (;;) {
    const state = await client.getRun(runId);
    if (state.status === "done" || state.status === "failed") {
      return state;
    }
    if (Date.now() >= deadline) {
      throw new Error(`run ${runId} still ${state.status} after ${timeoutMs} ms`);
    }
    await sleep(intervalMs);
  }
}
