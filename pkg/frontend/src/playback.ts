import type { CycleRecord, DetectionEvent, Position } from "./types.js";

export interface SilentEdge {
  pair: string;
  streak: number;
}

/**
 * Everything the grid view draws for one cycle, derived purely from
 * the recorded stream. Pairs use the backend's "A|B" labels; an edge
 * is solid when the pair communicated this cycle (streak reset to 0)
 * and dashed with its streak count otherwise.
 */
export interface PlaybackFrame {
  cycle: number;
  positions: Record<string, Position>;
  nodeCount: number;
  solidEdges: string[];
  silentEdges: SilentEdge[];
  clearedTargets: string[];
  detection: DetectionEvent | null;
  f_s: number;
  f_c: number;
  joint: number;
  resistance: number | "infinite" | null;
}

export function pairNodes(pair: string): [string, string] {
  const parts = pair.split("|");
  if (parts.length !== 2 || parts[0] === "" || parts[1] === "") {
    throw new Error(`malformed pair label '${pair}'`);
  }
  return [parts[0]!, parts[1]!];
}

/** Derive the frame for a 1-based cycle index. */
export function frameAt(records: CycleRecord[], cycle: number): PlaybackFrame {
  if (records.length === 0) throw new Error("no records");
  if (!Number.isInteger(cycle) || cycle < 1 || cycle > records.length) {
    throw new Error(`cycle ${cycle} outside [1, ${records.length}]`);
  }
  const record = records[cycle - 1]!;

  const solidEdges: string[] = [];
  const silentEdges: SilentEdge[] = [];
  if (record.streaks !== null) {
    for (const pair of Object.keys(record.streaks).sort()) {
      const streak = record.streaks[pair]!;
      if (streak === 0) {
        solidEdges.push(pair);
      } else {
        silentEdges.push({ pair, streak });
      }
    }
  }

  const clearedTargets: string[] = [];
  for (const earlier of records.slice(0, cycle)) {
    clearedTargets.push(...earlier.newly_cleared);
  }

  return {
    cycle: record.cycle,
    positions: record.positions,
    nodeCount: Object.keys(record.positions).length,
    solidEdges,
    silentEdges,
    clearedTargets,
    detection: record.detection,
    f_s: record.f_s,
    f_c: record.f_c,
    joint: record.joint,
    resistance: record.resistance,
  };
}

export interface OverlayToggles {
  edges: boolean;
  streaks: boolean;
  sensing: boolean;
  cleared: boolean;
}

export interface PlaybackState {
  runId: string;
  records: CycleRecord[];
  cycle: number;
  playing: boolean;
  speedMs: number;
  overlays: OverlayToggles;
}

export function createPlayback(runId: string, records: CycleRecord[], speedMs = 600): PlaybackState {
  if (records.length === 0) throw new Error("run produced no records");
  return {
    runId,
    records,
    cycle: 1,
    playing: false,
    speedMs,
    overlays: { edges: true, streaks: true, sensing: false, cleared: true },
  };
}

export function setCycle(state: PlaybackState, cycle: number): PlaybackState {
  const clamped = Math.max(1, Math.min(state.records.length, Math.round(cycle)));
  return { ...state, cycle: clamped };
}

export function step(state: PlaybackState, delta: number): PlaybackState {
  return setCycle(state, state.cycle + delta);
}

export function togglePlay(state: PlaybackState): PlaybackState {
  return { ...state, playing: !state.playing };
}

/** One timer tick: advance while playing, pause at the last record. */
export function tick(state: PlaybackState): PlaybackState {
  if (!state.playing) return state;
  if (state.cycle >= state.records.length) {
    return { ...state, playing: false };
  }
  return { ...state, cycle: state.cycle + 1 };
}

export function toggleOverlay(state: PlaybackState, overlay: keyof OverlayToggles): PlaybackState {
  return { ...state, overlays: { ...state.overlays, [overlay]: !state.overlays[overlay] } };
}

export function currentFrame(state: PlaybackState): PlaybackFrame {
  return frameAt(state.records, state.cycle);
}
