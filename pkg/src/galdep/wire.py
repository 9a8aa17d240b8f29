"""JSON codecs for values and selections.

Selections encode as the value tree with a per-node annotation field
(two-point annotations as booleans, bit-vector annotations as arrays of
booleans, raw values with null).  Closures appearing in environment dumps
are encoded for display but do not decode.
"""

from __future__ import annotations

from typing import Any

from .lattice import Lattice, UNIT
from .syntax import (
    Env, Hole, HOLE, Val, VBool, VClosure, VCons, VFlt, VInt, VMat, VNil,
    VRec, VStr,
)


class WireError(ValueError):
    pass


def encode_val(v: Val, lat: Lattice = UNIT) -> Any:
    def ann(a: Any) -> Any:
        # raw values carry None regardless of the session lattice
        return None if a is None else lat.to_json(a)

    if isinstance(v, Hole):
        return {"k": "hole"}
    if isinstance(v, VInt):
        return {"k": "int", "v": v.value, "ann": ann(v.ann)}
    if isinstance(v, VFlt):
        return {"k": "float", "v": v.value, "ann": ann(v.ann)}
    if isinstance(v, VStr):
        return {"k": "str", "v": v.value, "ann": ann(v.ann)}
    if isinstance(v, VBool):
        return {"k": "bool", "v": v.value, "ann": ann(v.ann)}
    if isinstance(v, VNil):
        return {"k": "nil", "ann": ann(v.ann)}
    if isinstance(v, VCons):
        return {"k": "cons", "head": encode_val(v.head, lat),
                "tail": encode_val(v.tail, lat), "ann": ann(v.ann)}
    if isinstance(v, VRec):
        return {"k": "record",
                "fields": [[n, encode_val(f, lat)] for n, f in v.fields],
                "ann": ann(v.ann)}
    if isinstance(v, VMat):
        return {"k": "matrix", "rows": v.rows, "cols": v.cols,
                "cells": [[encode_val(c, lat) for c in row] for row in v.cells],
                "rows_ann": ann(v.rows_ann), "cols_ann": ann(v.cols_ann),
                "ann": ann(v.ann)}
    if isinstance(v, VClosure):
        return {"k": "closure", "ann": ann(v.ann),
                "defs": [n for n, _ in v.defs]}
    raise WireError(f"cannot encode {type(v).__name__}")


def decode_val(obj: Any, lat: Lattice = UNIT) -> Val:
    if not isinstance(obj, dict) or "k" not in obj:
        raise WireError(f"not a value object: {obj!r}")
    kind = obj["k"]
    if kind == "hole":
        return HOLE
    raw_ann = obj.get("ann")
    ann = None if raw_ann is None else lat.from_json(raw_ann)
    if kind == "int":
        return VInt(int(obj["v"]), ann)
    if kind == "float":
        return VFlt(float(obj["v"]), ann)
    if kind == "str":
        return VStr(str(obj["v"]), ann)
    if kind == "bool":
        return VBool(bool(obj["v"]), ann)
    if kind == "nil":
        return VNil(ann)
    if kind == "cons":
        return VCons(decode_val(obj["head"], lat), decode_val(obj["tail"], lat), ann)
    if kind == "record":
        return VRec(tuple((n, decode_val(f, lat)) for n, f in obj["fields"]), ann)
    if kind == "matrix":
        cells = tuple(tuple(decode_val(c, lat) for c in row) for row in obj["cells"])
        ra, ca = obj.get("rows_ann"), obj.get("cols_ann")
        return VMat(cells, int(obj["rows"]), int(obj["cols"]),
                    None if ra is None else lat.from_json(ra),
                    None if ca is None else lat.from_json(ca), ann)
    if kind == "closure":
        raise WireError("closures do not decode")
    raise WireError(f"unknown value kind: {kind!r}")


def encode_env(env: Env, lat: Lattice = UNIT) -> list:
    return [[name, encode_val(v, lat)] for name, v in env.entries]


def decode_data_value(obj: Any) -> Val:
    """Decode a raw value from friendly JSON: scalars, arrays as lists,
    objects as records, ``{"matrix": [[...]]}`` as matrices.  The
    canonical tagged form is accepted too."""
    if isinstance(obj, bool):
        return VBool(obj)
    if isinstance(obj, int):
        return VInt(obj)
    if isinstance(obj, float):
        return VFlt(obj)
    if isinstance(obj, str):
        return VStr(obj)
    if isinstance(obj, list):
        out: Val = VNil()
        for item in reversed(obj):
            out = VCons(decode_data_value(item), out)
        return out
    if isinstance(obj, dict):
        if set(obj) == {"matrix"}:
            rows = obj["matrix"]
            if not rows or any(len(r) != len(rows[0]) for r in rows):
                raise WireError("matrix data must be rectangular and non-empty")
            cells = tuple(tuple(decode_data_value(c) for c in row) for row in rows)
            return VMat(cells, len(rows), len(rows[0]))
        if "k" in obj:
            return decode_val(obj, UNIT)
        return VRec(tuple((n, decode_data_value(v)) for n, v in obj.items()))
    raise WireError(f"cannot decode data value: {obj!r}")


def decode_data_env(obj: Any) -> Env:
    if not isinstance(obj, dict):
        raise WireError("data file must be a JSON object of named values")
    return Env(tuple((name, decode_data_value(v)) for name, v in obj.items()))
