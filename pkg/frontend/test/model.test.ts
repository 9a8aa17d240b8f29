import { describe, expect, it } from "vitest";

import {
  SelectionLayers, annSelected, listItems, matrixMarks, pathKey, tableMarks,
} from "../src/model.js";
import type { Val } from "../src/types.js";

describe("path keys", () => {
  it("are stable for equal paths", () => {
    expect(pathKey([{ cell: [2, 2] }])).toBe(pathKey([{ cell: [2, 2] }]));
    expect(pathKey(["head", { field: "x" }]))
      .not.toBe(pathKey(["tail", { field: "x" }]));
  });

  it("separate input targets from output paths", () => {
    expect(pathKey([{ cell: [1, 1] }], "image"))
      .not.toBe(pathKey([{ cell: [1, 1] }]));
  });
});

describe("annotation predicates", () => {
  it("treats booleans and bit vectors uniformly", () => {
    expect(annSelected(true)).toBe(true);
    expect(annSelected(false)).toBe(false);
    expect(annSelected([false, true])).toBe(true);
    expect(annSelected([false, false])).toBe(false);
    expect(annSelected(null)).toBe(false);
    expect(annSelected(undefined)).toBe(false);
  });
});

describe("selection layers", () => {
  it("toggles user picks", () => {
    const layers = new SelectionLayers();
    expect(layers.toggleUser([{ cell: [2, 2] }])).toBe(true);
    expect(layers.userDoc().paths).toHaveLength(1);
    expect(layers.toggleUser([{ cell: [2, 2] }])).toBe(false);
    expect(layers.userDoc().paths).toHaveLength(0);
  });

  it("replaces the computed layer wholesale", () => {
    const layers = new SelectionLayers();
    layers.setComputed({ paths: [{ path: ["head"], ann: true }] });
    layers.setComputed({ paths: [{ path: ["tail"], ann: true }] });
    expect(layers.marked("computed")).toEqual([pathKey(["tail"])]);
  });

  it("drops unselected annotations from the computed layer", () => {
    const layers = new SelectionLayers();
    layers.setComputed({
      paths: [
        { path: ["head"], ann: false },
        { path: ["tail"], ann: [true, false] },
      ],
    });
    expect(layers.marked("computed")).toEqual([pathKey(["tail"])]);
  });

  it("absorbs round-trip growth into the user layer", () => {
    const layers = new SelectionLayers();
    layers.toggleUser([{ cell: [2, 2] }]);
    layers.absorbIntoUser({
      paths: [
        { path: [{ cell: [1, 1] }], ann: true },
        { path: [{ cell: [9, 9] }], ann: false },
        { path: [{ cell: [3, 3] }], ann: true, in: "image" },
      ],
    });
    const keys = layers.marked("user");
    expect(keys).toContain(pathKey([{ cell: [1, 1] }]));
    expect(keys).not.toContain(pathKey([{ cell: [9, 9] }]));
    expect(keys).not.toContain(pathKey([{ cell: [3, 3] }], "image"));
  });
});

const sampleMatrix: Val = {
  k: "matrix", rows: 2, cols: 2,
  cells: [
    [{ k: "int", v: 1, ann: true }, { k: "hole" }],
    [{ k: "hole" }, { k: "int", v: 4, ann: false }],
  ],
  ann: false,
};

const sampleTable: Val = {
  k: "cons",
  head: {
    k: "record",
    fields: [["a", { k: "int", v: 1, ann: false }],
             ["b", { k: "str", v: "x", ann: true }]],
    ann: false,
  },
  tail: { k: "nil", ann: false },
  ann: false,
};

describe("wire value helpers", () => {
  it("flattens lists", () => {
    expect(listItems(sampleTable)).toHaveLength(1);
  });

  it("collects matrix marks at 1-based positions", () => {
    expect(matrixMarks(sampleMatrix)).toEqual(new Set(["1,1"]));
  });

  it("collects table marks as row,field", () => {
    expect(tableMarks(sampleTable)).toEqual(new Set(["1,b"]));
  });
});
