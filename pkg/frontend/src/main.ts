/** Application wiring: pick a demo, click artifacts, watch layers.
 *
 * Green marks are the user's picks; yellow marks are whatever the last
 * analysis response said. Round-trip buttons replay the computed layer
 * through the opposite direction and report the server-checked ordering
 * against the original selection.
 */

import { ApiError, Client } from "./api.js";
import { SelectionLayers, matrixMarks, tableMarks } from "./model.js";
import { renderBars, renderMatrix, renderSource, renderTable } from "./render.js";
import type {
  BwdResponse, HighlightSpan, PathStep, SessionInfo, Val,
} from "./types.js";

const client = new Client("");

interface AppState {
  session: SessionInfo | null;
  layers: SelectionLayers;
  lastBwd: BwdResponse | null;
  inputMarks: Map<string, Set<string>>; // per data binding
  outputComputed: Set<string>;
  linkedView: { name: string; marks: Set<string> } | null;
  highlights: HighlightSpan[];
  badge: string;
}

const state: AppState = {
  session: null,
  layers: new SelectionLayers(),
  lastBwd: null,
  inputMarks: new Map(),
  outputComputed: new Set(),
  linkedView: null,
  highlights: [],
  badge: "",
};

function byId(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node;
}

function toast(message: string): void {
  const box = byId("toast");
  box.textContent = message;
  box.classList.add("visible");
  setTimeout(() => box.classList.remove("visible"), 4000);
}

function isMatrix(v: Val): boolean {
  return v.k === "matrix";
}

async function openDemo(name: string): Promise<void> {
  state.layers.clear();
  state.lastBwd = null;
  state.inputMarks.clear();
  state.outputComputed.clear();
  state.linkedView = null;
  state.highlights = [];
  state.badge = "";
  try {
    state.session = await client.openExample(name);
  } catch (e) {
    toast(String(e));
    return;
  }
  render();
}

function userMarksFor(result: Val): Set<string> {
  const marks = new Set<string>();
  for (const key of state.layers.marked("user")) {
    if (isMatrix(result)) {
      const m = key.match(/^\{"cell":\[(\d+),(\d+)\]\}/);
      if (m) marks.add(`${m[1]},${m[2]}`);
    } else {
      const m = key.match(/^\{"index":(\d+)\}\/\{"field":"([^"]+)"\}/);
      if (m) marks.add(`${m[1]},${m[2]}`);
    }
  }
  return marks;
}

async function onSelect(path: PathStep[]): Promise<void> {
  if (!state.session) return;
  state.layers.toggleUser(path);
  const doc = state.layers.userDoc();
  const view = state.session.views[0].name;
  try {
    if (state.session.views.length > 1) {
      const linked = await client.link(state.session.id, doc, view);
      state.linkedView = {
        name: linked.to,
        marks: isMatrix(state.session.views[1].result)
          ? matrixMarks(linked.other)
          : tableMarks(linked.other),
      };
      state.inputMarks = new Map(
        Object.entries(linked.data).map(([name, val]) => [
          name, isMatrix(val) ? matrixMarks(val) : tableMarks(val),
        ]),
      );
      state.lastBwd = null;
      state.highlights = [];
    } else {
      const bwd = await client.bwd(state.session.id, doc);
      state.lastBwd = bwd;
      state.highlights = bwd.highlights;
      state.inputMarks = new Map(
        Object.entries(bwd.env).map(([name, val]) => [
          name, isMatrix(val) ? matrixMarks(val) : tableMarks(val),
        ]),
      );
    }
    state.outputComputed.clear();
    state.badge = "";
  } catch (e) {
    if (!(e instanceof DOMException && e.name === "AbortError")) toast(String(e));
  }
  render();
}

async function roundTripForward(): Promise<void> {
  if (!state.session || !state.lastBwd) {
    toast("make a selection first");
    return;
  }
  try {
    const fwd = await client.fwd(
      state.session.id, state.lastBwd.env_doc, state.lastBwd.highlights);
    const before = state.layers.userDoc();
    state.outputComputed = isMatrix(state.session.views[0].result)
      ? matrixMarks(fwd.output)
      : tableMarks(fwd.output);
    const growing = await client.leq(state.session.id, before, fwd.output_doc);
    state.badge = growing
      ? "round trip ⊇ original selection"
      : "round trip does not contain the original (unexpected)";
  } catch (e) {
    toast(String(e));
  }
  render();
}

async function roundTripDual(): Promise<void> {
  if (!state.session) return;
  const doc = state.layers.userDoc();
  if (doc.paths.length === 0) {
    toast("make a selection first");
    return;
  }
  try {
    const dual = await client.bwdDual(state.session.id, doc);
    state.lastBwd = dual;
    state.highlights = dual.highlights;
    state.inputMarks = new Map(
      Object.entries(dual.env).map(([name, val]) => [
        name, isMatrix(val) ? matrixMarks(val) : tableMarks(val),
      ]),
    );
    state.badge = "inputs needed only for the selection";
  } catch (e) {
    toast(String(e));
  }
  render();
}

function clearAll(): void {
  state.layers.clear();
  state.inputMarks.clear();
  state.outputComputed.clear();
  state.linkedView = null;
  state.highlights = [];
  state.lastBwd = null;
  state.badge = "";
  render();
}

function render(): void {
  const session = state.session;
  const outputBox = byId("output");
  const inputsBox = byId("inputs");
  const sourceBox = byId("sourcepane");
  const linkedBox = byId("linked");
  outputBox.textContent = "";
  inputsBox.textContent = "";
  sourceBox.textContent = "";
  linkedBox.textContent = "";
  byId("badge").textContent = state.badge;
  if (!session) return;

  const main = session.views[0];
  const userMarks = userMarksFor(main.result);
  const heading = document.createElement("h3");
  heading.textContent = `output of ${main.name}`;
  outputBox.appendChild(heading);
  if (isMatrix(main.result)) {
    outputBox.appendChild(
      renderMatrix(main.result, userMarks, state.outputComputed, onSelect));
  } else if (main.result.k === "cons" &&
             JSON.stringify(main.result).includes('"height"')) {
    outputBox.appendChild(
      renderBars(main.result, userMarks, state.outputComputed, onSelect));
  } else {
    outputBox.appendChild(
      renderTable(main.result, userMarks, state.outputComputed, onSelect));
  }

  for (const [name, value] of Object.entries(session.data)) {
    const label = document.createElement("h3");
    label.textContent = name;
    inputsBox.appendChild(label);
    const marks = state.inputMarks.get(name) ?? new Set<string>();
    inputsBox.appendChild(
      isMatrix(value)
        ? renderMatrix(value, new Set(), marks)
        : renderTable(value, new Set(), marks));
  }

  if (state.linkedView && session.views.length > 1) {
    const other = session.views.find((v) => v.name === state.linkedView!.name);
    if (other) {
      const label = document.createElement("h3");
      label.textContent = `linked: ${other.name}`;
      linkedBox.appendChild(label);
      linkedBox.appendChild(
        isMatrix(other.result)
          ? renderMatrix(other.result, new Set(), state.linkedView.marks)
          : renderTable(other.result, new Set(), state.linkedView.marks));
    }
  }

  sourceBox.appendChild(renderSource(main.source, main.file, state.highlights));
}

async function boot(): Promise<void> {
  const picker = byId("demo-picker") as HTMLSelectElement;
  try {
    const demos = await client.examples();
    for (const demo of demos) {
      const option = document.createElement("option");
      option.value = demo.name;
      option.textContent = `${demo.name} (${demo.kind})`;
      picker.appendChild(option);
    }
  } catch (e) {
    toast(`cannot reach the analysis service: ${e}`);
    return;
  }
  picker.addEventListener("change", () => void openDemo(picker.value));
  byId("btn-roundtrip").addEventListener("click", () => void roundTripForward());
  byId("btn-dual").addEventListener("click", () => void roundTripDual());
  byId("btn-clear").addEventListener("click", clearAll);
  await openDemo(picker.value || "convolve");
}

if (typeof document !== "undefined" && document.getElementById("demo-picker")) {
  void boot();
}
