import { describe, expect, it } from "vitest";
import { parseRecordStream } from "../src/ndjson.js";
import { fixtureText } from "./helpers.js";

describe("parseRecordStream", () => {
  it("splits a recorded run into cycle records and a summary", () => {
    const stream = parseRecordStream(fixtureText("netteam.ndjson"));
    expect(stream.records).toHaveLength(5);
    expect(stream.summary.outcome).toBe("detected");
    expect(stream.summary.cycles).toBe(5);
    expect(stream.records.map((r) => r.cycle)).toEqual([1, 2, 3, 4, 5]);
    for (const record of stream.records) {
      expect(record.type).toBe("cycle");
      expect(record.format_version).toBe(1);
    }
  });

  it("tolerates blank lines and trailing newline", () => {
    const text = fixtureText("net1.ndjson") + "\n\n";
    expect(parseRecordStream(text).records).toHaveLength(4);
  });

  it("keeps legacy resistance values intact", () => {
    const stream = parseRecordStream(fixtureText("net1.ndjson"));
    for (const record of stream.records) {
      expect(typeof record.resistance).toBe("number");
      expect(record.streaks).toBeNull();
      expect(record.conformance).toBeNull();
    }
  });

  it("rejects a stream without a summary", () => {
    const lines = fixtureText("netteam.ndjson").trim().split("\n");
    expect(() => parseRecordStream(lines.slice(0, -1).join("\n"))).toThrow("no summary");
  });

  it("rejects records after the summary", () => {
    const lines = fixtureText("netteam.ndjson").trim().split("\n");
    const reordered = [...lines.slice(1), lines[0]!].join("\n");
    expect(() => parseRecordStream(reordered)).toThrow("after summary");
  });

  it("rejects non-contiguous cycles", () => {
    const lines = fixtureText("netteam.ndjson").trim().split("\n");
    const gappy = [lines[0]!, lines[2]!, lines[lines.length - 1]!].join("\n");
    expect(() => parseRecordStream(gappy)).toThrow("cycle 3 at position 1");
  });

  it("rejects unknown record types", () => {
    expect(() => parseRecordStream('{"type": "mystery"}')).toThrow("unknown record type");
  });
});
