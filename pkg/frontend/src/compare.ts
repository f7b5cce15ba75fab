import type { CycleRecord, RunState } from "./types.js";

export interface RunInput {
  state: RunState;
  records?: CycleRecord[];
}

export interface ComparisonRow {
  runId: string;
  label: string | null;
  outcome: string;
  detectionCycle: number | null;
  detectedBy: string | null;
  cycles: number;
  meanFs: number;
  meanFc: number;
}

export interface ComparisonView {
  rows: ComparisonRow[];
  excluded: { runId: string; status: string }[];
  notice: string | null;
}

function mean(values: number[]): number {
  if (values.length === 0) return 0;
  return values.reduce((a, b) => a + b, 0) / values.length;
}

/**
 * Side-by-side outcome table over finished runs. Unfinished runs are
 * excluded and called out in the notice rather than dropped silently.
 */
export function buildComparison(runs: RunInput[]): ComparisonView {
  const rows: ComparisonRow[] = [];
  const excluded: { runId: string; status: string }[] = [];

  for (const { state, records } of runs) {
    if (state.status !== "done" || state.summary === null || records === undefined) {
      excluded.push({ runId: state.run_id, status: state.status });
      continue;
    }
    rows.push({
      runId: state.run_id,
      label: state.label,
      outcome: state.summary.outcome,
      detectionCycle: state.summary.detection?.cycle ?? null,
      detectedBy: state.summary.detection?.node_id ?? null,
      cycles: state.summary.cycles,
      meanFs: mean(records.map((r) => r.f_s)),
      meanFc: mean(records.map((r) => r.f_c)),
    });
  }

  const notice =
    excluded.length === 0
      ? null
      : `${excluded.length} run(s) not finished: ${excluded.map((e) => `${e.runId} (${e.status})`).join(", ")}`;
  return { rows, excluded, notice };
}

function escapeHtml(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function renderComparisonTable(view: ComparisonView): string {
  const header = "<tr><th>run</th><th>outcome</th><th>detected</th><th>cycles</th><th>mean f_s</th><th>mean f_c</th></tr>";
  const body = view.rows
    .map((row) => {
      const name = row.label ?? row.runId;
      const detected = row.detectionCycle === null ? "-" : `cycle ${row.detectionCycle} (${row.detectedBy})`;
      return (
        `<tr><td>${escapeHtml(name)}</td><td>${escapeHtml(row.outcome)}</td><td>${escapeHtml(detected)}</td>` +
        `<td>${row.cycles}</td><td>${row.meanFs.toFixed(4)}</td><td>${row.meanFc.toFixed(4)}</td></tr>`
      );
    })
    .join("");
  const notice = view.notice === null ? "" : `<p class="notice">${escapeHtml(view.notice)}</p>`;
  return `<table>${header}${body}</table>${notice}`;
}

const CHART_COLORS = ["#22d3ee", "#3b82f6", "#a3e635", "#f59e0b", "#ef4444", "#e879f9"];

export interface JointSeries {
  name: string;
  points: [number, number][];
}

export function jointSeries(name: string, records: CycleRecord[]): JointSeries {
  return { name, points: records.map((r) => [r.cycle, r.joint]) };
}

/** Overlaid J-versus-cycle line chart as a standalone SVG string. */
export function renderJointChart(series: JointSeries[], width = 480, height = 240): string {
  const margin = 30;
  const maxCycle = Math.max(1, ...series.flatMap((s) => s.points.map((p) => p[0])));
  const maxJoint = Math.max(1e-9, ...series.flatMap((s) => s.points.map((p) => p[1])));

  const sx = (cycle: number) => margin + ((cycle - 1) / Math.max(1, maxCycle - 1)) * (width - 2 * margin);
  const sy = (joint: number) => height - margin - (joint / maxJoint) * (height - 2 * margin);

  const lines = series
    .map((s, index) => {
      const color = CHART_COLORS[index % CHART_COLORS.length]!;
      const path = s.points.map(([c, j]) => `${sx(c).toFixed(1)},${sy(j).toFixed(1)}`).join(" ");
      const legendY = margin / 2 + index * 12;
      return (
        `<polyline points="${path}" fill="none" stroke="${color}" stroke-width="1.5"/>` +
        `<text x="${width - margin}" y="${legendY}" fill="${color}" font-size="10" text-anchor="end" font-family="monospace">${escapeHtml(s.name)}</text>`
      );
    })
    .join("");

  const axes =
    `<line x1="${margin}" y1="${height - margin}" x2="${width - margin}" y2="${height - margin}" stroke="#525252"/>` +
    `<line x1="${margin}" y1="${margin}" x2="${margin}" y2="${height - margin}" stroke="#525252"/>` +
    `<text x="${width / 2}" y="${height - 8}" fill="#a3a3a3" font-size="10" text-anchor="middle" font-family="monospace">cycle</text>` +
    `<text x="10" y="${height / 2}" fill="#a3a3a3" font-size="10" text-anchor="middle" font-family="monospace" transform="rotate(-90 10 ${height / 2})">J</text>`;

  return (
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${width} ${height}" width="${width}" height="${height}">` +
    `<rect width="100%" height="100%" fill="#0a0a0a"/>${axes}${lines}</svg>`
  );
}
