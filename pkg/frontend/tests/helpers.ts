import { readFileSync } from "node:fs";
import { parseRecordStream, type RecordStream } from "../src/ndjson.js";
import type { ScenarioDocument } from "../src/types.js";

export function fixtureText(name: string): string {
  return readFileSync(new URL(`../fixtures/${name}`, import.meta.url), "utf8");
}

export function fixtureStream(name: string): RecordStream {
  return parseRecordStream(fixtureText(name));
}

export function fixtureScenario(): ScenarioDocument {
  return JSON.parse(fixtureText("netteam.scenario.json")) as ScenarioDocument;
}

/** Content of the first SVG group with the given class. */
export function groupContent(svg: string, name: string): string {
  const match = svg.match(new RegExp(`<g class="${name}"[^>]*>([\\s\\S]*?)</g>`));
  if (match === null) throw new Error(`no <g class="${name}"> in svg`);
  return match[1]!;
}

export function countOf(haystack: string, needle: string): number {
  return haystack.split(needle).length - 1;
}
