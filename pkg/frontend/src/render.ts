/** DOM builders for the four artifact kinds: matrix grid, data table,
 * bar chart and source pane. Rendering is stateless; callers re-render
 * from the model after every server response.
 */

import { listItems, matrixMarks, recordFields, scalarText } from "./model.js";
import type { HighlightSpan, PathStep, Val } from "./types.js";

export type SelectHandler = (path: PathStep[]) => void;

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K, className?: string, text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function renderMatrix(
  value: Val,
  userMarks: Set<string>,
  computedMarks: Set<string>,
  onSelect?: SelectHandler,
): HTMLElement {
  const table = el("table", "matrix");
  if (value.k !== "matrix") return table;
  value.cells.forEach((row, i) => {
    const tr = el("tr");
    row.forEach((cell, j) => {
      const key = `${i + 1},${j + 1}`;
      const td = el("td", "cell", scalarText(cell));
      if (userMarks.has(key)) td.classList.add("user");
      if (computedMarks.has(key)) td.classList.add("computed");
      if (onSelect) {
        td.classList.add("clickable");
        td.addEventListener("click", () => onSelect([{ cell: [i + 1, j + 1] }]));
      }
      tr.appendChild(td);
    });
    table.appendChild(tr);
  });
  return table;
}

export function renderTable(
  value: Val,
  userMarks: Set<string>,
  computedMarks: Set<string>,
  onSelect?: SelectHandler,
): HTMLElement {
  const rows = listItems(value);
  const table = el("table", "data");
  if (rows.length === 0) return table;
  const header = el("tr");
  for (const [name] of recordFields(rows[0])) {
    header.appendChild(el("th", undefined, name));
  }
  table.appendChild(header);
  rows.forEach((row, i) => {
    const tr = el("tr");
    for (const [name, cell] of recordFields(row)) {
      const key = `${i + 1},${name}`;
      const td = el("td", "cell", scalarText(cell));
      if (userMarks.has(key)) td.classList.add("user");
      if (computedMarks.has(key)) td.classList.add("computed");
      if (onSelect) {
        td.classList.add("clickable");
        td.addEventListener("click", () =>
          onSelect([{ index: i + 1 }, { field: name }]));
      }
      tr.appendChild(td);
    }
    table.appendChild(tr);
  });
  return table;
}

/** Bars from a list of {label, height} records, as plain SVG. */
export function renderBars(
  value: Val,
  userMarks: Set<string>,
  computedMarks: Set<string>,
  onSelect?: SelectHandler,
): SVGSVGElement {
  const rows = listItems(value);
  const svg = document.createElementNS("http://www.w3.org/2000/svg", "svg");
  const barWidth = 46;
  const gap = 14;
  const height = 160;
  svg.setAttribute("width", String(rows.length * (barWidth + gap) + gap));
  svg.setAttribute("height", String(height + 24));
  let max = 1;
  const entries = rows.map((row) => {
    const fields = new Map(recordFields(row));
    const h = fields.get("height");
    const heightValue = h && (h.k === "int" || h.k === "float") ? h.v : 0;
    max = Math.max(max, heightValue);
    const label = fields.get("label");
    return { heightValue, label: label ? scalarText(label) : "" };
  });
  entries.forEach((entry, i) => {
    const x = gap + i * (barWidth + gap);
    const barHeight = (entry.heightValue / max) * height;
    const rect = document.createElementNS("http://www.w3.org/2000/svg", "rect");
    rect.setAttribute("x", String(x));
    rect.setAttribute("y", String(height - barHeight));
    rect.setAttribute("width", String(barWidth));
    rect.setAttribute("height", String(barHeight));
    rect.setAttribute("class", "bar");
    const key = `${i + 1},height`;
    if (userMarks.has(key)) rect.classList.add("user");
    if (computedMarks.has(key)) rect.classList.add("computed");
    if (onSelect) {
      rect.classList.add("clickable");
      rect.addEventListener("click", () =>
        onSelect([{ index: i + 1 }, { field: "height" }]));
    }
    svg.appendChild(rect);
    const text = document.createElementNS("http://www.w3.org/2000/svg", "text");
    text.setAttribute("x", String(x + barWidth / 2));
    text.setAttribute("y", String(height + 16));
    text.setAttribute("text-anchor", "middle");
    text.setAttribute("class", "bar-label");
    text.textContent = entry.label;
    svg.appendChild(text);
  });
  return svg;
}

/** Source text with computed highlight spans wrapped in styled marks. */
export function renderSource(
  source: string, file: string, highlights: HighlightSpan[],
): HTMLElement {
  const pre = el("pre", "source");
  const spans = highlights
    .filter((h) => h.file === file)
    .sort((a, b) => a.start - b.start || a.end - b.end);
  let pos = 0;
  for (const h of spans) {
    if (h.start < pos) continue; // nested spans render under the outer one
    pre.appendChild(document.createTextNode(source.slice(pos, h.start)));
    const mark = el("mark", "computed", source.slice(h.start, h.end));
    pre.appendChild(mark);
    pos = h.end;
  }
  pre.appendChild(document.createTextNode(source.slice(pos)));
  return pre;
}
