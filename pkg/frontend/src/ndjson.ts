import type { CycleRecord, RunSummary } from "./types.js";

export interface RecordStream {
  records: CycleRecord[];
  summary: RunSummary;
}

/**
 * Parse an NDJSON record stream as written by the backend's export
 * endpoint: one cycle record per line, summary last.
 */
export function parseRecordStream(text: string): RecordStream {
  const records: CycleRecord[] = [];
  let summary: RunSummary | null = null;

  for (const raw of text.split("\n")) {
    const line = raw.trim();
    if (line === "") continue;
    const obj = JSON.parse(line) as { type?: string };
    if (obj.type === "cycle") {
      if (summary !== null) throw new Error("cycle record after summary");
      records.push(obj as CycleRecord);
    } else if (obj.type === "summary") {
      if (summary !== null) throw new Error("duplicate summary");
      summary = obj as RunSummary;
    } else {
      throw new Error(`unknown record type ${JSON.stringify(obj.type)}`);
    }
  }

  if (summary === null) throw new Error("stream has no summary");
  // Cycles are 1-based and contiguous.
  records.forEach((record, index) => {
    if (record.cycle !== index + 1) {
      throw new Error(`cycle ${record.cycle} at position ${index}`);
    }
  });
  return { records, summary };
}
