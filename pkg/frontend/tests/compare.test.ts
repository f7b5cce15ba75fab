import { describe, expect, it } from "vitest";
import { buildComparison, jointSeries, renderComparisonTable, renderJointChart } from "../src/compare.js";
import type { RunState, RunSummary } from "../src/types.js";
import { fixtureStream } from "./helpers.js";

const netteam = fixtureStream("netteam.ndjson");
const net3 = fixtureStream("net3.ndjson");
const net1 = fixtureStream("net1.ndjson");

function doneState(runId: string, label: string, summary: RunSummary): RunState {
  return { format_version: 1, run_id: runId, label, status: "done", summary, error: null };
}

describe("buildComparison", () => {
  it("tabulates outcome, detection, and mean utilities per run", () => {
    const view = buildComparison([
      { state: doneState("r1", "net1", net1.summary), records: net1.records },
      { state: doneState("r3", "net3", net3.summary), records: net3.records },
    ]);
    expect(view.notice).toBeNull();
    expect(view.rows).toHaveLength(2);

    const [row1, row3] = view.rows;
    expect(row1!.outcome).toBe("converged");
    expect(row1!.detectionCycle).toBeNull();
    expect(row3!.outcome).toBe("detected");
    expect(row3!.detectionCycle).toBe(8);
    expect(row3!.detectedBy).toBe("U3");

    const meanFc = net3.records.reduce((a, r) => a + r.f_c, 0) / net3.records.length;
    expect(row3!.meanFc).toBeCloseTo(meanFc, 12);
    expect(row1!.meanFc).toBeGreaterThanOrEqual(0);
    expect(row1!.meanFc).toBeLessThanOrEqual(1);
  });

  it("produces identical rows for the same run twice", () => {
    const input = { state: doneState("r1", "team", netteam.summary), records: netteam.records };
    const view = buildComparison([input, { ...input }]);
    expect(view.rows[0]).toEqual(view.rows[1]);
  });

  it("excludes unfinished runs with a notice", () => {
    const pending: RunState = { format_version: 1, run_id: "rp", label: null, status: "running", summary: null, error: null };
    const view = buildComparison([
      { state: doneState("r1", "team", netteam.summary), records: netteam.records },
      { state: pending },
    ]);
    expect(view.rows).toHaveLength(1);
    expect(view.excluded).toEqual([{ runId: "rp", status: "running" }]);
    expect(view.notice).toContain("rp (running)");
  });
});

describe("rendering", () => {
  it("renders the table with one row per finished run", () => {
    const view = buildComparison([
      { state: doneState("r1", "net1", net1.summary), records: net1.records },
      { state: doneState("r3", "net3", net3.summary), records: net3.records },
    ]);
    const html = renderComparisonTable(view);
    expect(html).toContain("<th>outcome</th>");
    expect(html).toContain("<td>net1</td>");
    expect(html).toContain("<td>converged</td>");
    expect(html).toContain("cycle 8 (U3)");
  });

  it("shows the notice for excluded runs", () => {
    const pending: RunState = { format_version: 1, run_id: "rp", label: null, status: "pending", summary: null, error: null };
    const html = renderComparisonTable(buildComparison([{ state: pending }]));
    expect(html).toContain('class="notice"');
    expect(html).toContain("rp (pending)");
  });

  it("overlays one polyline per run in the joint chart", () => {
    const svg = renderJointChart([
      jointSeries("team", netteam.records),
      jointSeries("ladder", net3.records),
    ]);
    expect(svg.split("<polyline").length - 1).toBe(2);
    expect(svg).toContain(">team</text>");
    expect(svg).toContain(">ladder</text>");
    const points = netteam.records.length + net3.records.length;
    expect(svg.split(",").length - 1).toBeGreaterThanOrEqual(points);
  });
});
