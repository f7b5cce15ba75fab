import { ApiError, createClient } from "./api.js";
import type { RunInput } from "./compare.js";
import { buildComparison, jointSeries, renderComparisonTable, renderJointChart } from "./compare.js";
import type { ScenarioDraft } from "./draft.js";
import { canSubmit, createDraft, setRequirement } from "./draft.js";
import { renderFrame } from "./gridView.js";
import { launchAndWatch, type WatchedRun } from "./launch.js";
import type { PlaybackState } from "./playback.js";
import { currentFrame, setCycle, tick, togglePlay, toggleOverlay, type OverlayToggles } from "./playback.js";
import type { ScenarioDocument } from "./types.js";

const API_BASE = (window as { PLANNER_API?: string }).PLANNER_API ?? "http://127.0.0.1:8350";

const client = createClient(API_BASE);

interface AppState {
  scenarioId: string | null;
  draft: ScenarioDraft | null;
  playback: PlaybackState | null;
  scenario: ScenarioDocument | null;
  finished: WatchedRun[];
}

const state: AppState = { scenarioId: null, draft: null, playback: null, scenario: null, finished: [] };

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (node === null) throw new Error(`missing #${id}`);
  return node as T;
}

function showError(message: string): void {
  el<HTMLElement>("status").textContent = message;
}

function renderMatrixEditor(): void {
  const host = el<HTMLElement>("matrix");
  const draft = state.draft;
  if (draft === null || draft.document.net === undefined) {
    host.innerHTML = "<p>legacy scenario: no requirement matrix</p>";
    return;
  }
  const net = draft.document.net;
  const teamOf = new Map(draft.document.nodes.map((n) => [n.id, n.team]));
  const color = (id: string) => (teamOf.get(id) === "A" ? "#22d3ee" : teamOf.get(id) === "B" ? "#3b82f6" : "#e5e5e5");

  const head = `<tr><th></th>${net.order.map((id) => `<th style="color:${color(id)}">${id}</th>`).join("")}</tr>`;
  const rows = net.order
    .map((a, i) => {
      const cells = net.order
        .map((b, j) => {
          if (i === j) return "<td>-</td>";
          const cell = net.matrix[i]?.[j];
          const text = cell == null ? "?" : `(${cell[0]}, ${cell[1]})`;
          return `<td><button data-a="${a}" data-b="${b}">${text}</button></td>`;
        })
        .join("");
      return `<tr><th style="color:${color(a)}">${a}</th>${cells}</tr>`;
    })
    .join("");
  host.innerHTML = `<table>${head}${rows}</table>`;

  host.querySelectorAll<HTMLButtonElement>("button[data-a]").forEach((button) => {
    button.addEventListener("click", () => {
      const a = button.dataset.a!;
      const b = button.dataset.b!;
      const c = Number(window.prompt(`max silent cycles c(${a}, ${b})`, "2"));
      const h = Number(window.prompt(`max hops h(${a}, ${b})`, "10"));
      state.draft = setRequirement(state.draft!, a, b, c, h);
      renderMatrixEditor();
      renderErrors();
    });
  });
}

function renderErrors(): void {
  const draft = state.draft;
  const host = el<HTMLElement>("errors");
  el<HTMLButtonElement>("launch").disabled = draft === null || !canSubmit(draft);
  if (draft === null || draft.errors.length === 0) {
    host.innerHTML = "";
    return;
  }
  host.innerHTML = `<ul>${draft.errors.map((e) => `<li><code>${e.field}</code>: ${e.message}</li>`).join("")}</ul>`;
}

function renderPlayback(): void {
  const playback = state.playback;
  const scenario = state.scenario;
  if (playback === null || scenario === null) return;
  const frame = currentFrame(playback);
  el<HTMLElement>("grid").innerHTML = renderFrame(frame, scenario, playback.overlays);
  const slider = el<HTMLInputElement>("cycle");
  slider.max = String(playback.records.length);
  slider.value = String(playback.cycle);
  el<HTMLElement>("cycle-label").textContent = `${playback.cycle} / ${playback.records.length}`;
}

function renderComparison(): void {
  const inputs: RunInput[] = state.finished.map((run) => ({
    state: {
      format_version: 1,
      run_id: run.runId,
      label: run.label,
      status: "done",
      summary: run.summary,
      error: null,
    },
    records: run.playback.records,
  }));
  el<HTMLElement>("compare").innerHTML = renderComparisonTable(buildComparison(inputs));
  const series = state.finished.map((run) => jointSeries(run.label ?? run.runId, run.playback.records));
  el<HTMLElement>("chart").innerHTML = series.length > 0 ? renderJointChart(series) : "";
}

async function selectScenario(id: string): Promise<void> {
  state.scenarioId = id;
  state.scenario = await client.getScenario(id);
  state.draft = createDraft(state.scenario);
  renderMatrixEditor();
  renderErrors();
}

async function launch(): Promise<void> {
  const draft = state.draft;
  if (draft === null) return;
  showError("running...");
  try {
    const run = await launchAndWatch(client, draft, state.scenarioId ?? undefined);
    state.scenario = draft.document;
    state.playback = run.playback;
    state.finished.push(run);
    showError(`run ${run.runId} ${run.summary.outcome}`);
    renderPlayback();
    renderComparison();
  } catch (err) {
    if (err instanceof ApiError) {
      showError(`${err.field}: ${err.message}`);
    } else {
      showError((err as Error).message);
    }
  }
}

async function init(): Promise<void> {
  try {
    const listing = await client.listScenarios();
    const select = el<HTMLSelectElement>("scenario");
    select.innerHTML = listing.scenarios
      .map((s) => `<option value="${s.id}">${s.id} (${s.comm_model}${s.teamed ? ", teams" : ""})</option>`)
      .join("");
    select.addEventListener("change", () => void selectScenario(select.value));
    const first = listing.scenarios[0];
    if (first !== undefined) await selectScenario(first.id);
  } catch (err) {
    showError(`backend unreachable: ${(err as Error).message}`);
    return;
  }

  el<HTMLButtonElement>("launch").addEventListener("click", () => void launch());
  el<HTMLInputElement>("cycle").addEventListener("input", (event) => {
    if (state.playback === null) return;
    state.playback = setCycle(state.playback, Number((event.target as HTMLInputElement).value));
    renderPlayback();
  });
  el<HTMLButtonElement>("play").addEventListener("click", () => {
    if (state.playback === null) return;
    state.playback = togglePlay(state.playback);
  });
  (["edges", "streaks", "sensing", "cleared"] as (keyof OverlayToggles)[]).forEach((overlay) => {
    el<HTMLInputElement>(`overlay-${overlay}`).addEventListener("change", () => {
      if (state.playback === null) return;
      state.playback = toggleOverlay(state.playback, overlay);
      renderPlayback();
    });
  });

  window.setInterval(() => {
    if (state.playback === null || !state.playback.playing) return;
    state.playback = tick(state.playback);
    renderPlayback();
  }, 600);
}

void init();
