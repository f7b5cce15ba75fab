import type { NetCell, NetSection } from "./types.js";

export interface FieldError {
  field: string;
  message: string;
}

function isCount(value: number): boolean {
  return Number.isInteger(value) && value >= 1;
}

/** Locate a pair's cells; throws on unknown ids. */
export function pairIndex(net: NetSection, a: string, b: string): [number, number] {
  const i = net.order.indexOf(a);
  const j = net.order.indexOf(b);
  if (i < 0) throw new Error(`unknown node '${a}'`);
  if (j < 0) throw new Error(`unknown node '${b}'`);
  return [i, j];
}

/**
 * Validate one requirement edit before applying it. Diagonal cells do
 * not exist (no self pairs) and both counts must be integers >= 1.
 */
export function validateEdit(net: NetSection, a: string, b: string, c: number, h: number): FieldError[] {
  const errors: FieldError[] = [];
  let i: number;
  let j: number;
  try {
    [i, j] = pairIndex(net, a, b);
  } catch (err) {
    return [{ field: "net.pair", message: (err as Error).message }];
  }
  if (i === j) {
    return [{ field: "net.pair", message: "no self pairs" }];
  }
  const cell = `net.matrix[${Math.min(i, j)}][${Math.max(i, j)}]`;
  if (!isCount(c)) errors.push({ field: `${cell}.c`, message: "c must be an integer >= 1" });
  if (!isCount(h)) errors.push({ field: `${cell}.h`, message: "h must be an integer >= 1" });
  return errors;
}

/**
 * Apply a requirement edit, updating both (i, j) and (j, i) cells.
 * Returns a new section; every untouched cell keeps its original
 * array object, so unedited entries serialize bit-exactly.
 */
export function editRequirement(net: NetSection, a: string, b: string, c: number, h: number): NetSection {
  const errors = validateEdit(net, a, b, c, h);
  if (errors.length > 0) {
    throw new Error(errors.map((e) => `${e.field}: ${e.message}`).join("; "));
  }
  const [i, j] = pairIndex(net, a, b);
  const matrix = net.matrix.map((row) => row.slice());
  const edited: NetCell = [c, h];
  matrix[i]![j] = edited;
  matrix[j]![i] = edited.slice() as NetCell;
  return { order: net.order.slice(), matrix };
}

/** Read a pair's requirement; null only for diagonal queries. */
export function requirementOf(net: NetSection, a: string, b: string): NetCell {
  const [i, j] = pairIndex(net, a, b);
  const row = net.matrix[i];
  if (row === undefined) throw new Error(`matrix row ${i} missing`);
  const cell = row[j];
  return cell === undefined ? null : cell;
}

/**
 * Whole-section validation for draft submission: square matrix over
 * the order, null diagonal, symmetric integer cells >= 1.
 */
export function validateNetSection(net: NetSection): FieldError[] {
  const errors: FieldError[] = [];
  const n = net.order.length;
  if (net.matrix.length !== n) {
    return [{ field: "net.matrix", message: `expected ${n} rows, found ${net.matrix.length}` }];
  }
  for (let i = 0; i < n; i++) {
    const row = net.matrix[i]!;
    if (row.length !== n) {
      errors.push({ field: `net.matrix[${i}]`, message: `expected ${n} entries, found ${row.length}` });
      continue;
    }
    for (let j = 0; j < n; j++) {
      const cell = row[j]!;
      const field = `net.matrix[${i}][${j}]`;
      if (i === j) {
        if (cell !== null) errors.push({ field, message: "diagonal must be null" });
        continue;
      }
      if (cell === null) {
        errors.push({ field, message: "missing requirement" });
        continue;
      }
      if (!isCount(cell[0])) errors.push({ field: `${field}.c`, message: "c must be an integer >= 1" });
      if (!isCount(cell[1])) errors.push({ field: `${field}.h`, message: "h must be an integer >= 1" });
      const mirror = net.matrix[j]?.[i];
      if (j > i && (mirror == null || mirror[0] !== cell[0] || mirror[1] !== cell[1])) {
        errors.push({ field, message: "matrix must be symmetric" });
      }
    }
  }
  return errors;
}

/** Serialize one cell exactly as the document JSON carries it. */
export function serializeCell(cell: NetCell): string {
  return JSON.stringify(cell);
}

/** Serialize the whole section in document order. */
export function serializeNetSection(net: NetSection): string {
  return JSON.stringify({ order: net.order, matrix: net.matrix });
}
