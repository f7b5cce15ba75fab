import type { ApiClient } from "./api.js";
import type { ScenarioDraft } from "./draft.js";
import { canSubmit } from "./draft.js";
import { createPlayback, type PlaybackState } from "./playback.js";
import type { PollOptions } from "./poll.js";
import { pollRun } from "./poll.js";
import type { RunSummary } from "./types.js";

export interface WatchedRun {
  runId: string;
  label: string | null;
  summary: RunSummary;
  playback: PlaybackState;
}

/**
 * Submit a draft and watch it to completion: poll until the run
 * finishes, pull the full record stream, and hand back playback
 * positioned at cycle 1. An invalid draft never reaches the network.
 */
export async function launchAndWatch(
  client: ApiClient,
  draft: ScenarioDraft,
  label?: string,
  poll: PollOptions = {},
): Promise<WatchedRun> {
  if (!canSubmit(draft)) {
    const fields = draft.errors.map((e) => e.field).join(", ");
    throw new Error(`draft has validation errors (${fields})`);
  }

  const created = await client.createRun({ scenario: draft.document, label });
  const state = await pollRun(client, created.run_id, poll);
  if (state.status === "failed" || state.summary === null) {
    throw new Error(state.error ?? "run failed without a diagnostic");
  }

  const page = await client.getCycles(created.run_id);
  return {
    runId: created.run_id,
    label: state.label,
    summary: state.summary,
    playback: createPlayback(created.run_id, page.records),
  };
}
