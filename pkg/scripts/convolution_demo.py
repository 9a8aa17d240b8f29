#!/usr/bin/env python3
"""Walk through the four dependency relations on the convolution demo.

Renders the 5x5 image and 3x3 kernel as ASCII grids with selected cells
bracketed, for each of: backward demand of one output cell, its forward
round trip, the dual forward pass from one kernel cell, and the dual
round trip of that output set.
"""

from pathlib import Path

from galdep.bwd import eval_bwd
from galdep.evaluator import eval_term
from galdep.fwd import eval_fwd
from galdep.lattice import TWO
from galdep.linking import bwd_dual, fwd_dual
from galdep.surface import load_program
from galdep.syntax import Env, HOLE, Hole, VInt, VMat, expand_hole
from galdep.util import run_deep

DEMOS = Path(__file__).resolve().parents[1] / "src" / "galdep" / "demos"

KERNEL = ((-2, -1, 0), (-1, 1, 1), (0, 1, 2))
IMAGE = tuple(
    tuple(3 + ((7 * i + 11 * j) % 13) for j in range(5)) for i in range(5)
)


def matrix(values):
    return VMat(tuple(tuple(VInt(v) for v in row) for row in values),
                len(values), len(values[0]))


def grid(mat_sel, raw):
    lines = []
    sel = expand_hole(mat_sel, raw, TWO)
    for i in range(raw.rows):
        cells = []
        for j in range(raw.cols):
            cell = sel.cells[i][j]
            mark = isinstance(cell, Hole) is False and cell.ann
            text = f"{raw.cells[i][j].value:4d}"
            cells.append(f"[{text}]" if mark else f" {text} ")
        lines.append(" ".join(cells))
    return "\n".join(lines)


def select_cells(result, cells):
    rows, cols = result.rows, result.cols
    return VMat(
        tuple(
            tuple(
                VInt(result.cells[i][j].value, True) if (i + 1, j + 1) in cells else HOLE
                for j in range(cols)
            )
            for i in range(rows)
        ),
        rows, cols, False, False, False,
    )


def main() -> None:
    prog = load_program((DEMOS / "convolve.fld").read_text(), file="convolve.fld")
    image, kernel = matrix(IMAGE), matrix(KERNEL)
    env = Env((("image", image), ("kernel", kernel)))
    trace, result = run_deep(eval_term, env, prog.core)

    print("== backward demand of output cell (2,2) ==")
    env_d, term_d, ambient = run_deep(eval_bwd, trace, select_cells(result, {(2, 2)}), TWO)
    print("image:");  print(grid(env_d.lookup("image"), image))
    print("kernel:"); print(grid(env_d.lookup("kernel"), kernel))

    print("\n== forward round trip of that input selection ==")
    out = run_deep(eval_fwd, trace, env_d, term_d, ambient, TWO)
    print("output availability:"); print(grid(out, result))

    print("\n== outputs that need kernel cell (1,2) (dual forward) ==")
    kernel_sel = VMat(
        tuple(tuple(VInt(KERNEL[i][j], (i, j) == (0, 1)) for j in range(3))
              for i in range(3)),
        3, 3, False, False, False)
    dual_out = run_deep(fwd_dual, trace, Env((("image", HOLE), ("kernel", kernel_sel))),
                        HOLE, False, env, prog.core, TWO)
    print(grid(dual_out, result))

    print("\n== inputs needed only for those outputs (dual backward) ==")
    selected = {(i + 1, j + 1) for i in range(5) for j in range(5)
                if not isinstance(dual_out.cells[i][j], Hole) and dual_out.cells[i][j].ann}
    env_dd, _t, _a = run_deep(bwd_dual, trace, select_cells(result, selected),
                              env, prog.core, result, TWO)
    print("image:");  print(grid(env_dd.lookup("image"), image))
    print("kernel:"); print(grid(env_dd.lookup("kernel"), kernel))


if __name__ == "__main__":
    main()
