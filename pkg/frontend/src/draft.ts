import type { FieldError } from "./matrixEditor.js";
import { validateEdit, validateNetSection } from "./matrixEditor.js";
import type { NetCell, ScenarioDocument } from "./types.js";

export type SectionName =
  | "grid"
  | "nodes"
  | "params"
  | "weights"
  | "net"
  | "targets"
  | "red_target"
  | "team_policy"
  | "max_cycles";

/**
 * Editable scenario with per-section dirty flags and validation
 * messages keyed by field path. A draft with any error cannot be
 * submitted; the backend stays the final authority, these checks only
 * catch what the form can see before a request goes out.
 */
export interface ScenarioDraft {
  document: ScenarioDocument;
  dirty: Partial<Record<SectionName, boolean>>;
  errors: FieldError[];
}

function clone<T>(value: T): T {
  return JSON.parse(JSON.stringify(value)) as T;
}

export function validateDocument(document: ScenarioDocument): FieldError[] {
  const errors: FieldError[] = [];
  const { weights, params, grid } = document;

  if (weights.alpha_s < 0 || weights.alpha_s > 1) {
    errors.push({ field: "weights.alpha_s", message: "must lie in [0, 1]" });
  }
  if (Math.abs(weights.alpha_s + weights.alpha_c - 1) > 1e-9) {
    errors.push({ field: "weights.alpha_c", message: "alpha_s + alpha_c must equal 1" });
  }
  if (!(params.s_suf < params.s_max)) {
    errors.push({ field: "params.s_suf", message: "must be below s_max" });
  }
  if (!Number.isInteger(document.max_cycles) || document.max_cycles < 1) {
    errors.push({ field: "max_cycles", message: "must be a positive integer" });
  }
  document.nodes.forEach((node, index) => {
    const [x, y] = node.position;
    if (x < 0 || x >= grid.width || y < 0 || y >= grid.height) {
      errors.push({ field: `nodes[${index}].position`, message: "outside the grid" });
    }
  });
  if (document.comm_model === "dtn") {
    if (document.net === undefined) {
      errors.push({ field: "net", message: "dtn scenarios need a requirement matrix" });
    } else {
      errors.push(...validateNetSection(document.net));
    }
  }
  return errors;
}

export function createDraft(document: ScenarioDocument): ScenarioDraft {
  const copy = clone(document);
  return { document: copy, dirty: {}, errors: validateDocument(copy) };
}

export function canSubmit(draft: ScenarioDraft): boolean {
  return draft.errors.length === 0;
}

function touched(draft: ScenarioDraft, section: SectionName): ScenarioDraft {
  return {
    document: draft.document,
    dirty: { ...draft.dirty, [section]: true },
    errors: validateDocument(draft.document),
  };
}

/**
 * Edit one pair's requirement. Both mirrored cells update together;
 * invalid values land in the error list (submission blocked) instead
 * of mutating the matrix.
 */
export function setRequirement(draft: ScenarioDraft, a: string, b: string, c: number, h: number): ScenarioDraft {
  const net = draft.document.net;
  if (net === undefined) {
    return { ...draft, errors: [...draft.errors, { field: "net", message: "scenario has no net section" }] };
  }
  const editErrors = validateEdit(net, a, b, c, h);
  if (editErrors.length > 0) {
    return {
      document: draft.document,
      dirty: { ...draft.dirty, net: true },
      errors: [...validateDocument(draft.document), ...editErrors],
    };
  }
  const i = net.order.indexOf(a);
  const j = net.order.indexOf(b);
  const cell: NetCell = [c, h];
  net.matrix[i]![j] = cell;
  net.matrix[j]![i] = [c, h];
  return touched(draft, "net");
}

export function setWeights(draft: ScenarioDraft, alphaS: number, alphaC: number): ScenarioDraft {
  draft.document.weights.alpha_s = alphaS;
  draft.document.weights.alpha_c = alphaC;
  return touched(draft, "weights");
}

export function setTeam(draft: ScenarioDraft, nodeId: string, team: string | undefined): ScenarioDraft {
  const node = draft.document.nodes.find((n) => n.id === nodeId);
  if (node === undefined) {
    return { ...draft, errors: [...draft.errors, { field: "nodes", message: `unknown node '${nodeId}'` }] };
  }
  if (team === undefined) {
    delete node.team;
  } else {
    node.team = team;
  }
  return touched(draft, "nodes");
}

export function setMaxCycles(draft: ScenarioDraft, maxCycles: number): ScenarioDraft {
  draft.document.max_cycles = maxCycles;
  return touched(draft, "max_cycles");
}
