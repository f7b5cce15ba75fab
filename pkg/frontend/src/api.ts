import type {
  ApiErrorBody,
  CyclesPage,
  RunCreated,
  RunState,
  ScenarioDocument,
  ScenarioEnvelope,
  ScenarioListing,
} from "./types.js";

export interface NetOverride {
  a: string;
  b: string;
  c: number;
  h: number;
}

/** POST /runs body: inline scenario, or base id plus what-if edits. */
export interface RunRequest {
  run_id?: string;
  label?: string;
  scenario?: ScenarioDocument;
  base?: string;
  net_overrides?: NetOverride[];
  weight_overrides?: { alpha_s: number; alpha_c: number };
  team_overrides?: Record<string, string | null>;
}

export class ApiError extends Error {
  readonly status: number;
  readonly field: string;

  constructor(status: number, field: string, message: string) {
    super(message);
    this.status = status;
    this.field = field;
  }
}

export interface ApiClient {
  listScenarios(): Promise<ScenarioListing>;
  getScenario(id: string): Promise<ScenarioDocument>;
  createRun(request: RunRequest): Promise<RunCreated>;
  getRun(runId: string): Promise<RunState>;
  getCycles(runId: string, from?: number, to?: number): Promise<CyclesPage>;
  exportRun(runId: string): Promise<string>;
  deleteRun(runId: string): Promise<void>;
}

async function raiseFor(response: Response): Promise<never> {
  let field = "response";
  let message = `HTTP ${response.status}`;
  try {
    const body = (await response.json()) as ApiErrorBody;
    field = body.error.field;
    message = body.error.message;
  } catch {
    // Non-JSON error body; keep the status-line message.
  }
  throw new ApiError(response.status, field, message);
}

/**
 * Thin typed wrapper over the planner HTTP API. `fetchFn` is
 * injectable so tests can run without a live backend.
 */
export function createClient(baseUrl: string, fetchFn: typeof fetch = fetch): ApiClient {
  const root = baseUrl.replace(/\/$/, "");

  async function getJson<T>(path: string): Promise<T> {
    const response = await fetchFn(`${root}${path}`);
    if (!response.ok) await raiseFor(response);
    return (await response.json()) as T;
  }

  return {
    listScenarios: () => getJson<ScenarioListing>("/scenarios"),

    async getScenario(id) {
      const envelope = await getJson<ScenarioEnvelope>(`/scenarios/${encodeURIComponent(id)}`);
      return envelope.document;
    },

    async createRun(request) {
      const response = await fetchFn(`${root}/runs`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(request),
      });
      if (!response.ok) await raiseFor(response);
      return (await response.json()) as RunCreated;
    },

    getRun: (runId) => getJson<RunState>(`/runs/${encodeURIComponent(runId)}`),

    getCycles(runId, from, to) {
      const query = new URLSearchParams();
      if (from !== undefined) query.set("from", String(from));
      if (to !== undefined) query.set("to", String(to));
      const suffix = query.size > 0 ? `?${query.toString()}` : "";
      return getJson<CyclesPage>(`/runs/${encodeURIComponent(runId)}/cycles${suffix}`);
    },

    async exportRun(runId) {
      const response = await fetchFn(`${root}/runs/${encodeURIComponent(runId)}/export`);
      if (!response.ok) await raiseFor(response);
      return await response.text();
    },

    async deleteRun(runId) {
      const response = await fetchFn(`${root}/runs/${encodeURIComponent(runId)}`, { method: "DELETE" });
      if (!response.ok) await raiseFor(response);
    },
  };
}
