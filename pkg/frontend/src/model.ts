/** Pure view-model state: selection layers and path bookkeeping.
 *
 * Two layers exist per artifact: what the user picked (green) and what
 * the latest analysis computed (yellow). Every highlight shown derives
 * from the most recent server response; the client never computes
 * dependencies itself.
 */

import type { Ann, DocPath, PathStep, SelectionDoc, Val } from "./types.js";

export type Layer = "user" | "computed";

export function stepKey(step: PathStep): string {
  return typeof step === "string" ? step : JSON.stringify(step);
}

export function pathKey(path: PathStep[], target?: string): string {
  const prefix = target === undefined ? "" : `in:${target}/`;
  return prefix + path.map(stepKey).join("/");
}

export function annSelected(ann: Ann | undefined): boolean {
  if (ann === undefined || ann === null) return false;
  if (typeof ann === "boolean") return ann;
  return ann.some((b) => b);
}

export class SelectionLayers {
  private layers = new Map<Layer, Map<string, DocPath>>([
    ["user", new Map()],
    ["computed", new Map()],
  ]);

  /** Toggle one output path in the user layer; returns the new state. */
  toggleUser(path: PathStep[]): boolean {
    const key = pathKey(path);
    const layer = this.layers.get("user")!;
    if (layer.has(key)) {
      layer.delete(key);
      return false;
    }
    layer.set(key, { path, ann: true });
    return true;
  }

  clear(layer?: Layer): void {
    if (layer) this.layers.get(layer)!.clear();
    else this.layers.forEach((m) => m.clear());
  }

  setComputed(doc: SelectionDoc): void {
    const layer = this.layers.get("computed")!;
    layer.clear();
    for (const p of doc.paths) {
      if (annSelected(p.ann ?? true)) layer.set(pathKey(p.path, p.in), p);
    }
  }

  /** Merge server growth into the user layer (round-trip result). */
  absorbIntoUser(doc: SelectionDoc): void {
    const layer = this.layers.get("user")!;
    for (const p of doc.paths) {
      if (p.in === undefined && annSelected(p.ann ?? true)) {
        layer.set(pathKey(p.path), { path: p.path, ann: true });
      }
    }
  }

  userDoc(): SelectionDoc {
    return { paths: [...this.layers.get("user")!.values()] };
  }

  computedDoc(): SelectionDoc {
    return { paths: [...this.layers.get("computed")!.values()] };
  }

  isMarked(layer: Layer, path: PathStep[], target?: string): boolean {
    return this.layers.get(layer)!.has(pathKey(path, target));
  }

  marked(layer: Layer): string[] {
    return [...this.layers.get(layer)!.keys()];
  }
}

/** Flatten a wire list value into an array. */
export function listItems(v: Val): Val[] {
  const out: Val[] = [];
  let cursor = v;
  while (cursor.k === "cons") {
    out.push(cursor.head);
    cursor = cursor.tail;
  }
  return out;
}

export function recordFields(v: Val): [string, Val][] {
  return v.k === "record" ? v.fields : [];
}

export function scalarText(v: Val): string {
  switch (v.k) {
    case "int": return String(v.v);
    case "float": return v.v.toFixed(1);
    case "str": return v.v;
    case "bool": return v.v ? "true" : "false";
    case "hole": return "";
    default: return v.k;
  }
}

/** Cell-level selection marks of a matrix value, by 1-based position. */
export function matrixMarks(v: Val): Set<string> {
  const marks = new Set<string>();
  if (v.k !== "matrix") return marks;
  v.cells.forEach((row, i) => {
    row.forEach((cell, j) => {
      if (cell.k !== "hole" && annSelected((cell as { ann?: Ann }).ann)) {
        marks.add(`${i + 1},${j + 1}`);
      }
    });
  });
  return marks;
}

/** Field-level marks of a list-of-records value: "row,field" keys. */
export function tableMarks(v: Val): Set<string> {
  const marks = new Set<string>();
  listItems(v).forEach((row, i) => {
    for (const [name, cell] of recordFields(row)) {
      if (cell.k !== "hole" && annSelected((cell as { ann?: Ann }).ann)) {
        marks.add(`${i + 1},${name}`);
      }
    }
  });
  return marks;
}
