import type { PlaybackFrame, OverlayToggles } from "./playback.js";
import { pairNodes } from "./playback.js";
import type { Position, ScenarioDocument } from "./types.js";

export interface GridViewOptions {
  cellSize?: number;
  margin?: number;
}

const TEAM_COLORS: Record<string, string> = {
  A: "#22d3ee",
  B: "#3b82f6",
};
const UNTEAMED_COLOR = "#e5e5e5";
const PRESET_COLOR = "#f59e0b";

function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function fmt(value: number): string {
  return Number.isInteger(value) ? String(value) : value.toFixed(1);
}

/**
 * Render one playback frame as a standalone SVG string. Every overlay
 * lives in its own group so toggles simply include or skip a layer;
 * nothing here recomputes utilities, it draws exactly what the record
 * stream says.
 */
export function renderFrame(
  frame: PlaybackFrame,
  scenario: ScenarioDocument,
  overlays: OverlayToggles,
  options: GridViewOptions = {},
): string {
  const { cellSize = 24, margin = 16 } = options;
  const { width, height } = scenario.grid;
  const svgWidth = width * cellSize + margin * 2;
  const svgHeight = height * cellSize + margin * 2 + 28;

  // Grid y grows upward; SVG y grows downward.
  const px = (p: Position) => margin + (p[0] + 0.5) * cellSize;
  const py = (p: Position) => margin + (height - 1 - p[1] + 0.5) * cellSize;

  const teamOf = new Map(scenario.nodes.map((n) => [n.id, n.team]));
  const roleOf = new Map(scenario.nodes.map((n) => [n.id, n.role]));
  const cleared = new Set(frame.clearedTargets);

  const layers: string[] = [];

  layers.push(`<rect width="100%" height="100%" fill="#0a0a0a"/>`);

  const gridLines: string[] = [];
  for (let x = 0; x <= width; x++) {
    const gx = margin + x * cellSize;
    gridLines.push(`<line x1="${gx}" y1="${margin}" x2="${gx}" y2="${margin + height * cellSize}"/>`);
  }
  for (let y = 0; y <= height; y++) {
    const gy = margin + y * cellSize;
    gridLines.push(`<line x1="${margin}" y1="${gy}" x2="${margin + width * cellSize}" y2="${gy}"/>`);
  }
  layers.push(`<g class="grid" stroke="#262626" stroke-width="1">${gridLines.join("")}</g>`);

  const obstacles = (scenario.grid.obstacles ?? [])
    .map(
      (p) =>
        `<rect x="${px(p) - cellSize / 2}" y="${py(p) - cellSize / 2}" width="${cellSize}" height="${cellSize}" fill="#404040"/>`,
    )
    .join("");
  layers.push(`<g class="obstacles">${obstacles}</g>`);

  if (overlays.cleared) {
    const targets = scenario.targets
      .map((target) => {
        const done = cleared.has(target.id) || target.cleared === true;
        const fill = done ? "none" : (target.team !== undefined ? TEAM_COLORS[target.team] ?? "#a3e635" : "#a3e635");
        const stroke = done ? "#525252" : "none";
        return `<circle cx="${px(target.position)}" cy="${py(target.position)}" r="${cellSize * 0.18}" fill="${fill}" stroke="${stroke}" stroke-width="1.5"/>`;
      })
      .join("");
    layers.push(`<g class="targets">${targets}</g>`);
  }

  const red = scenario.red_target.position;
  layers.push(
    `<g class="red-target"><circle cx="${px(red)}" cy="${py(red)}" r="${cellSize * 0.3}" fill="#ef4444"/></g>`,
  );

  if (overlays.sensing) {
    const radius = scenario.params.s_max * cellSize;
    const discs = Object.entries(frame.positions)
      .filter(([id]) => roleOf.get(id) === "reactive")
      .map(([, p]) => `<circle cx="${px(p)}" cy="${py(p)}" r="${radius}" fill="#22d3ee" fill-opacity="0.06"/>`)
      .join("");
    layers.push(`<g class="sensing">${discs}</g>`);
  }

  if (overlays.edges) {
    const solid = frame.solidEdges
      .map((pair) => {
        const [a, b] = pairNodes(pair);
        const pa = frame.positions[a];
        const pb = frame.positions[b];
        if (pa === undefined || pb === undefined) return "";
        return `<line x1="${px(pa)}" y1="${py(pa)}" x2="${px(pb)}" y2="${py(pb)}" stroke="#34d399" stroke-width="1.5"/>`;
      })
      .join("");
    layers.push(`<g class="edges-solid">${solid}</g>`);

    const silent = frame.silentEdges
      .map(({ pair, streak }) => {
        const [a, b] = pairNodes(pair);
        const pa = frame.positions[a];
        const pb = frame.positions[b];
        if (pa === undefined || pb === undefined) return "";
        const line = `<line x1="${px(pa)}" y1="${py(pa)}" x2="${px(pb)}" y2="${py(pb)}" stroke="#737373" stroke-width="1" stroke-dasharray="4 3"/>`;
        if (!overlays.streaks) return line;
        const mx = (px(pa) + px(pb)) / 2;
        const my = (py(pa) + py(pb)) / 2;
        const label = `<text x="${mx}" y="${my - 3}" fill="#fbbf24" font-size="10" text-anchor="middle" font-family="monospace">${streak}</text>`;
        return line + label;
      })
      .join("");
    layers.push(`<g class="edges-silent">${silent}</g>`);
  }

  const nodes = Object.keys(frame.positions)
    .sort()
    .map((id) => {
      const p = frame.positions[id]!;
      const team = teamOf.get(id);
      const preset = roleOf.get(id) === "preset";
      const color = preset ? PRESET_COLOR : team !== undefined ? TEAM_COLORS[team] ?? UNTEAMED_COLOR : UNTEAMED_COLOR;
      const r = cellSize * 0.28;
      const shape = preset
        ? `<rect x="${px(p) - r}" y="${py(p) - r}" width="${2 * r}" height="${2 * r}" fill="${color}"/>`
        : `<circle cx="${px(p)}" cy="${py(p)}" r="${r}" fill="${color}"/>`;
      const label = `<text x="${px(p)}" y="${py(p) - r - 3}" fill="#e5e5e5" font-size="10" text-anchor="middle" font-family="monospace">${escapeXml(id)}</text>`;
      return shape + label;
    })
    .join("");
  layers.push(`<g class="nodes">${nodes}</g>`);

  const resistance =
    frame.resistance === null ? "" : ` R=${frame.resistance === "infinite" ? "inf" : fmt(frame.resistance)}`;
  const hud = `cycle ${frame.cycle}  f_s=${frame.f_s.toFixed(3)} f_c=${frame.f_c.toFixed(3)} J=${frame.joint.toFixed(3)}${resistance}`;
  layers.push(
    `<g class="hud"><text x="${margin}" y="${svgHeight - 10}" fill="#a3a3a3" font-size="11" font-family="monospace">${escapeXml(hud)}</text></g>`,
  );

  if (frame.detection !== null) {
    const text = `detected by ${frame.detection.node_id} at cycle ${frame.detection.cycle}`;
    layers.push(
      `<g class="detection-banner">` +
        `<rect x="${margin}" y="${margin}" width="${width * cellSize}" height="22" fill="#7f1d1d" fill-opacity="0.9"/>` +
        `<text x="${svgWidth / 2}" y="${margin + 15}" fill="#fecaca" font-size="12" text-anchor="middle" font-family="monospace">${escapeXml(text)}</text>` +
        `</g>`,
    );
  }

  return (
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${svgWidth} ${svgHeight}" width="${svgWidth}" height="${svgHeight}">` +
    layers.join("\n") +
    `</svg>`
  );
}
