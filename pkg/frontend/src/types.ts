/**
 * JSON shapes exchanged with the planner HTTP API.
 *
 * These mirror the wire format exactly; the UI never derives utilities
 * itself, it only renders what the backend recorded.
 */

export type Position = [number, number];

/** [c, h] requirement for a node pair, or null on the diagonal. */
export type NetCell = [number, number] | null;

export interface GridSection {
  width: number;
  height: number;
  step_meters: number;
  metric?: string;
  obstacles?: Position[];
}

export interface NodeSection {
  id: string;
  role: "preset" | "reactive";
  position: Position;
  team?: string;
  waypoints?: Position[];
}

export interface ParamsSection {
  s_max: number;
  s_suf: number;
  c_max: number;
  m_max: number;
  tau?: number;
  clearing_radius?: number;
}

export interface WeightsSection {
  alpha_s: number;
  alpha_c: number;
  normalize_sensing?: boolean;
}

export interface NetSection {
  order: string[];
  matrix: NetCell[][];
}

export interface TargetSection {
  id: string;
  position: Position;
  weight: number;
  team?: string;
  cleared?: boolean;
}

export interface RedTargetSection {
  position: Position;
  detection_radius?: number;
}

export interface TeamPolicySection {
  assigned_weight: number;
  other_weight: number;
}

export interface ScenarioDocument {
  grid: GridSection;
  nodes: NodeSection[];
  params: ParamsSection;
  weights: WeightsSection;
  comm_model: "legacy" | "dtn";
  net?: NetSection;
  targets: TargetSection[];
  red_target: RedTargetSection;
  max_cycles: number;
  team_policy?: TeamPolicySection;
}

export interface DetectionEvent {
  node_id: string;
  cycle: number;
}

/** One greedy commit inside a cycle's trace. */
export interface TraceStep {
  node_id: string;
  position: Position;
  gain: number;
  sensing: number;
  comm: number;
  joint: number;
  candidate_count: number;
  resistance: number | "infinite" | null;
}

/** One line of the NDJSON record stream (type "cycle"). */
export interface CycleRecord {
  type: "cycle";
  format_version: number;
  cycle: number;
  positions: Record<string, Position>;
  f_s: number;
  f_c: number;
  joint: number;
  newly_cleared: string[];
  detection: DetectionEvent | null;
  trace: TraceStep[];
  resistance: number | "infinite" | null;
  conformance: Record<string, boolean> | null;
  streaks: Record<string, number> | null;
}

export type RunOutcome = "detected" | "converged" | "exhausted";

/** Final line of the NDJSON record stream (type "summary"). */
export interface RunSummary {
  type: "summary";
  format_version: number;
  outcome: RunOutcome;
  detection: DetectionEvent | null;
  cycles: number;
  final_positions: Record<string, Position>;
}

export type RunStatus = "pending" | "running" | "done" | "failed";

export interface RunCreated {
  format_version: number;
  run_id: string;
  status: RunStatus;
}

export interface RunState {
  format_version: number;
  run_id: string;
  label: string | null;
  status: RunStatus;
  summary: RunSummary | null;
  error: string | null;
}

export interface CyclesPage {
  format_version: number;
  run_id: string;
  from: number;
  to: number;
  total: number;
  records: CycleRecord[];
}

export interface ScenarioInfo {
  id: string;
  comm_model: "legacy" | "dtn";
  node_count: number;
  target_count: number;
  max_cycles: number;
  teamed: boolean;
}

export interface ScenarioListing {
  format_version: number;
  scenarios: ScenarioInfo[];
  schema: Record<string, unknown>;
}

export interface ScenarioEnvelope {
  format_version: number;
  id: string;
  document: ScenarioDocument;
}

export interface ApiErrorBody {
  format_version: number;
  error: { field: string; message: string };
}
