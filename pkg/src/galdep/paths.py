"""Selection addressing: paths into a raw value resolving to single
annotation slots, and selection documents assigning lattice elements to
paths.

Path steps: ``{"field": name}``, ``{"index": i}`` (1-based list
position), ``"head"``, ``"tail"``, ``{"cell": [i, j]}``, ``"dims"``
(followed by ``{"index": 1|2}`` for the row/column count), and ``"node"``
(the constructor at the current position; terminal only).  A path
resolves to the annotation of the node it lands on.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Any, Optional

from .lattice import Ann, Lattice, TWO, lattice_from_spec
from .syntax import (
    Hole, HOLE, Val, VBool, VCons, VFlt, VInt, VMat, VNil, VRec, VStr,
)


class PathError(ValueError):
    def __init__(self, message: str, step_index: Optional[int] = None):
        super().__init__(message)
        self.message = message
        self.step_index = step_index


Step = Any  # str or single-key dict


@dataclass
class SelectionDoc:
    """Assignments of lattice elements to paths; unassigned positions
    default to bottom.

    Each assignment may name an input binding (``target``); ``None``
    addresses the computation's output."""

    assignments: list[tuple[Optional[str], list[Step], Ann]] = field(default_factory=list)
    lattice: Lattice = TWO

    def targets(self) -> set:
        return {t for t, _, _ in self.assignments}

    def to_json(self) -> dict:
        out = []
        for target, steps, ann in self.assignments:
            item = {"path": steps, "ann": self.lattice.to_json(ann)}
            if target is not None:
                item["in"] = target
            out.append(item)
        return {"lattice": self.lattice.name, "paths": out}


_BARE_KEY = re.compile(r"([,{]\s*)([A-Za-z_][A-Za-z_0-9]*)(\s*:)")


def _normalize_json(text: str) -> str:
    # tolerate unquoted keys in hand-typed documents
    return _BARE_KEY.sub(r'\1"\2"\3', text)


def parse_selection_doc(spec: Any, lat: Optional[Lattice] = None) -> SelectionDoc:
    """Accepts a full document, a single step dict, or a list of steps."""
    if isinstance(spec, str):
        spec = json.loads(_normalize_json(spec.strip()))
    if isinstance(spec, dict) and "paths" in spec:
        lat = lat or lattice_from_spec(spec.get("lattice"))
        doc = SelectionDoc(lattice=lat)
        for item in spec["paths"]:
            ann = item.get("ann")
            ann = lat.top if ann is None else lat.from_json(ann)
            doc.assignments.append((item.get("in"), list(item["path"]), ann))
        return doc
    lat = lat or TWO
    if isinstance(spec, dict):
        return SelectionDoc([(None, [spec], lat.top)], lat)
    if isinstance(spec, list):
        if not spec:
            return SelectionDoc([], lat)
        return SelectionDoc([(None, list(spec), lat.top)], lat)
    raise PathError(f"cannot interpret selection document: {spec!r}")


def apply_paths(raw: Val, doc: SelectionDoc, target: Optional[str] = None) -> Val:
    """Selection with the document's annotations for one target set,
    holes elsewhere."""
    sel: Val = HOLE
    for tgt, steps, ann in doc.assignments:
        if tgt == target:
            sel = _set_path(sel, raw, steps, ann, 0, doc.lattice)
    return sel


def _expand_one(sel: Val, raw: Val, lat: Lattice) -> Val:
    """Expand a hole one constructor level against the raw shape."""
    if not isinstance(sel, Hole):
        return sel
    bot = lat.bot
    if isinstance(raw, VInt):
        return VInt(raw.value, bot)
    if isinstance(raw, VFlt):
        return VFlt(raw.value, bot)
    if isinstance(raw, VStr):
        return VStr(raw.value, bot)
    if isinstance(raw, VBool):
        return VBool(raw.value, bot)
    if isinstance(raw, VNil):
        return VNil(bot)
    if isinstance(raw, VCons):
        return VCons(HOLE, HOLE, bot)
    if isinstance(raw, VRec):
        return VRec(tuple((n, HOLE) for n, _ in raw.fields), bot)
    if isinstance(raw, VMat):
        return VMat(tuple((HOLE,) * raw.cols for _ in range(raw.rows)),
                    raw.rows, raw.cols, bot, bot, bot)
    raise PathError(f"cannot select inside {type(raw).__name__}")


def _with_ann(sel: Val, ann: Ann) -> Val:
    if isinstance(sel, VMat):
        return VMat(sel.cells, sel.rows, sel.cols, sel.rows_ann, sel.cols_ann, ann)
    kwargs = {f: getattr(sel, f) for f in sel.__dataclass_fields__}
    kwargs["ann"] = ann
    return type(sel)(**kwargs)


def _set_path(sel: Val, raw: Val, steps: list[Step], ann: Ann, depth: int,
              lat: Lattice) -> Val:
    sel = _expand_one(sel, raw, lat)
    if not steps or steps[0] == "node":
        if steps and len(steps) > 1:
            raise PathError("'node' must be the final step", depth)
        return _with_ann(sel, ann)
    step, rest = steps[0], steps[1:]
    if isinstance(step, dict) and "field" in step:
        if not isinstance(raw, VRec):
            raise PathError(f"field step on {type(raw).__name__}", depth)
        name = step["field"]
        fields = dict(sel.fields)
        raw_fields = dict(raw.fields)
        if name not in raw_fields:
            raise PathError(f"no field '{name}'", depth)
        fields[name] = _set_path(fields[name], raw_fields[name], rest, ann,
                                 depth + 1, lat)
        return VRec(tuple((n, fields[n]) for n, _ in raw.fields), sel.ann)
    if step == "head" or step == "tail":
        if not isinstance(raw, VCons):
            raise PathError(f"{step} step on {type(raw).__name__}", depth)
        if step == "head":
            return VCons(_set_path(sel.head, raw.head, rest, ann, depth + 1, lat),
                         sel.tail, sel.ann)
        return VCons(sel.head,
                     _set_path(sel.tail, raw.tail, rest, ann, depth + 1, lat),
                     sel.ann)
    if isinstance(step, dict) and "index" in step:
        i = int(step["index"])
        if i < 1:
            raise PathError("list index is 1-based", depth)
        steps2 = ["tail"] * (i - 1) + ["head"] + rest
        return _set_path(sel, raw, steps2, ann, depth, lat)
    if isinstance(step, dict) and "cell" in step:
        if not isinstance(raw, VMat):
            raise PathError(f"cell step on {type(raw).__name__}", depth)
        i, j = (int(x) for x in step["cell"])
        if not (1 <= i <= raw.rows and 1 <= j <= raw.cols):
            raise PathError(f"cell ({i},{j}) out of bounds", depth)
        cells = [list(row) for row in sel.cells]
        cells[i - 1][j - 1] = _set_path(cells[i - 1][j - 1],
                                        raw.cells[i - 1][j - 1], rest, ann,
                                        depth + 1, lat)
        return VMat(tuple(tuple(row) for row in cells), sel.rows, sel.cols,
                    sel.rows_ann, sel.cols_ann, sel.ann)
    if step == "dims":
        if not isinstance(raw, VMat):
            raise PathError(f"dims step on {type(raw).__name__}", depth)
        if len(rest) != 1 or not (isinstance(rest[0], dict) and "index" in rest[0]):
            raise PathError("'dims' must be followed by an index of 1 or 2", depth)
        which = int(rest[0]["index"])
        if which == 1:
            return VMat(sel.cells, sel.rows, sel.cols, ann, sel.cols_ann, sel.ann)
        if which == 2:
            return VMat(sel.cells, sel.rows, sel.cols, sel.rows_ann, ann, sel.ann)
        raise PathError("dims index must be 1 or 2", depth + 1)
    raise PathError(f"unknown path step: {step!r}", depth)


def selection_to_doc(sel: Val, lat: Lattice, target: Optional[str] = None) -> SelectionDoc:
    """Enumerate the above-bottom annotation slots of a selection as a
    document (inverse of ``apply_paths`` up to hole-equivalence)."""
    doc = SelectionDoc(lattice=lat)

    def walk(node: Val, prefix: list[Step]) -> None:
        if isinstance(node, Hole):
            return
        if isinstance(node, (VInt, VFlt, VStr, VBool, VNil)):
            if node.ann != lat.bot:
                doc.assignments.append((target, prefix, node.ann))
            return
        if isinstance(node, VCons):
            if node.ann != lat.bot:
                doc.assignments.append((target, prefix + ["node"], node.ann))
            walk(node.head, prefix + ["head"])
            walk(node.tail, prefix + ["tail"])
            return
        if isinstance(node, VRec):
            if node.ann != lat.bot:
                doc.assignments.append((target, prefix + ["node"], node.ann))
            for name, sub in node.fields:
                walk(sub, prefix + [{"field": name}])
            return
        if isinstance(node, VMat):
            if node.ann != lat.bot:
                doc.assignments.append((target, prefix + ["node"], node.ann))
            if node.rows_ann != lat.bot:
                doc.assignments.append((target, prefix + ["dims", {"index": 1}], node.rows_ann))
            if node.cols_ann != lat.bot:
                doc.assignments.append((target, prefix + ["dims", {"index": 2}], node.cols_ann))
            for i, row in enumerate(node.cells):
                for j, cell in enumerate(row):
                    walk(cell, prefix + [{"cell": [i + 1, j + 1]}])
            return
        if isinstance(node, VClosure):
            return  # not addressable
        raise PathError(f"cannot address {type(node).__name__}")

    walk(sel, [])
    return doc
