"""Evaluation, pattern matching and recursive-definition closure."""

import pytest

from galdep.evaluator import (
    EvalError, MatchFailure, MBool, MCons, MNil, MVar, TApp, TInt, close_defs,
    eval_term, match_value, trace_to_json, trace_to_text,
)
from galdep.surface import load_program
from galdep.syntax import (
    App, Bool, ElimBool, ElimCons, ElimList, ElimRec, ElimTrue, ElimVar, Env,
    Int, Lam, LetRec, MatGen, MatLookup, PrimApp, Proj, Rec, Var, VBool,
    VClosure, VCons, VInt, VMat, VNil, VRec,
)


class TestMatch:
    def test_bool(self):
        w, rho, cont = match_value(VBool(True), ElimBool(Int(1), Int(2)))
        assert w == MBool(True) and rho == () and cont == Int(1)

    def test_var_binds(self):
        w, rho, cont = match_value(VInt(5), ElimVar("x", Var("x")))
        assert w == MVar("x") and rho == (("x", VInt(5)),)

    def test_cons_head_then_tail(self):
        sigma = ElimList(Int(0), ElimVar("x", ElimList(Int(1), ElimVar("y", ElimVar("ys", Int(2))))))
        w, rho, cont = match_value(VCons(VInt(1), VNil()), sigma)
        assert w == MCons(MVar("x"), MNil())
        assert rho == (("x", VInt(1)),)
        assert cont == Int(1)

    def test_kind_mismatch(self):
        with pytest.raises(MatchFailure):
            match_value(VInt(5), ElimBool(Int(1), Int(2)))

    def test_record_fields_left_to_right(self):
        sigma = ElimRec(("a", "b"), ElimVar("u", ElimVar("v", Var("u"))))
        w, rho, cont = match_value(VRec((("a", VInt(1)), ("b", VInt(2)))), sigma)
        assert rho == (("u", VInt(1)), ("v", VInt(2)))

    def test_partial_eliminators(self):
        w, _, cont = match_value(VBool(True), ElimTrue(Int(7)))
        assert cont == Int(7)
        with pytest.raises(MatchFailure):
            match_value(VBool(False), ElimTrue(Int(7)))
        w, rho, _ = match_value(VCons(VInt(1), VNil()),
                                ElimCons(ElimVar("x", ElimVar("xs", Var("x")))))
        assert rho[0] == ("x", VInt(1))


class TestCloseDefs:
    def test_empty(self):
        assert close_defs(Env(), ()) == Env()

    def test_single(self):
        env = Env((("y", VInt(1)),))
        defs = (("f", ElimVar("x", Var("x"))),)
        out = close_defs(env, defs)
        assert out.entries[0][0] == "f"
        clo = out.entries[0][1]
        assert isinstance(clo, VClosure) and clo.env is env and clo.defs is defs

    def test_mutual_capture_full_block(self):
        defs = (("even", ElimVar("n", Int(1))), ("odd", ElimVar("n", Int(0))))
        out = close_defs(Env(), defs)
        for _, clo in out.entries:
            assert clo.defs is defs


class TestEval:
    def test_apply_bool_eliminator(self):
        t, v = eval_term(Env(), App(Lam(ElimBool(Int(1), Int(2))), Bool(True)))
        assert v == VInt(1)
        assert isinstance(t, TApp) and t.match == MBool(True)
        assert isinstance(t.body, TInt)

    def test_lambda_closure_has_no_recursive_defs(self):
        _, v = eval_term(Env(), Lam(ElimVar("x", Var("x"))))
        assert isinstance(v, VClosure) and v.defs == ()

    def test_letrec_binds_closures(self):
        body = ElimVar("x", Var("x"))
        t, v = eval_term(Env(), LetRec((("f", body),), App(Var("f"), Int(3))))
        assert v == VInt(3)

    def test_determinism(self):
        prog = load_program("sum [x * x | x <- [1 .. 5]]")
        t1, v1 = eval_term(Env(), prog.core)
        t2, v2 = eval_term(Env(), prog.core)
        assert v1 == v2 == VInt(55)
        assert trace_to_json(t1) == trace_to_json(t2)

    def test_unbound_variable(self):
        with pytest.raises(EvalError, match="unbound variable"):
            eval_term(Env(), Var("ghost"))

    def test_missing_field(self):
        with pytest.raises(EvalError, match="no field"):
            eval_term(Env(), Proj(Rec((("a", Int(1)),), None), "b"))

    def test_apply_non_function(self):
        with pytest.raises(EvalError, match="non-function"):
            eval_term(Env(), App(Int(1), Int(2)))

    def test_division_by_zero(self):
        with pytest.raises(EvalError, match="division by zero"):
            eval_term(Env(), PrimApp("/", (Int(1), Int(0))))

    def test_matrix_out_of_bounds(self):
        env = Env((("m", VMat(((VInt(1),),), 1, 1)),))
        with pytest.raises(EvalError, match="out of bounds"):
            eval_term(env, MatLookup(Var("m"), Int(2), Int(1)))

    def test_matgen_binds_one_based_indices(self):
        t, v = eval_term(Env(), MatGen(Int(2), Int(3), "i", "j",
                                       PrimApp("+", (PrimApp("*", (Var("i"), Int(10))), Var("j"))),
                                       None))
        assert v.cells[0][0] == VInt(11)
        assert v.cells[1][2] == VInt(23)

    def test_trace_dump_forms(self):
        t, _ = eval_term(Env(), App(Lam(ElimBool(Int(1), Int(2))), Bool(False)))
        j = trace_to_json(t)
        assert j["t"] == "app" and j["match"] == {"m": "bool", "value": False}
        text = trace_to_text(t)
        assert "app" in text and "bool" in text


def brute_force_convolve(image, kernel):
    """Independent straight-loop oracle with zero boundary."""
    m, n = len(image), len(image[0])
    p, q = len(kernel), len(kernel[0])
    hp, hq = p // 2, q // 2
    out = [[0] * n for _ in range(m)]
    for x in range(m):
        for y in range(n):
            acc = 0
            for s in range(p):
                for t in range(q):
                    u, v = x + s - hp, y + t - hq
                    if 0 <= u < m and 0 <= v < n:
                        acc += image[u][v] * kernel[s][t]
            out[x][y] = acc
    return out


def test_convolution_against_oracle():
    image = [[3 + ((7 * i + 11 * j) % 13) for j in range(5)] for i in range(5)]
    kernel = [[-2, -1, 0], [-1, 1, 1], [0, 1, 2]]
    env = Env((
        ("image", VMat(tuple(tuple(VInt(c) for c in row) for row in image), 5, 5)),
        ("kernel", VMat(tuple(tuple(VInt(c) for c in row) for row in kernel), 3, 3)),
    ))
    from pathlib import Path

    src = (Path(__file__).parents[1] / "src/galdep/demos/convolve.fld").read_text()
    prog = load_program(src, file="convolve.fld")
    _, result = eval_term(env, prog.core)
    expected = brute_force_convolve(image, kernel)
    got = [[c.value for c in row] for row in result.cells]
    assert got == expected


def brute_force_convolve_with_method(image, kernel, method):
    """Oracle covering all three boundary methods."""
    m, n = len(image), len(image[0])
    p, q = len(kernel), len(kernel[0])
    hp, hq = p // 2, q // 2

    def remap(i, limit):
        if method == "wrap":
            return i % limit
        if method == "extend":
            return min(max(i, 0), limit - 1)
        return i if 0 <= i < limit else None

    out = [[0] * n for _ in range(m)]
    for x in range(m):
        for y in range(n):
            acc = 0
            for s in range(p):
                for t in range(q):
                    u = remap(x + s - hp, m)
                    v = remap(y + t - hq, n)
                    if u is not None and v is not None:
                        acc += image[u][v] * kernel[s][t]
            out[x][y] = acc
    return out


@pytest.mark.parametrize("method", ["zero", "wrap", "extend"])
def test_convolution_boundary_methods_against_oracle(method):
    from pathlib import Path

    image = [[1 + ((3 * i + 5 * j) % 7) for j in range(4)] for i in range(4)]
    kernel = [[1, 0], [2, -1]]
    env = Env((
        ("image", VMat(tuple(tuple(VInt(c) for c in row) for row in image), 4, 4)),
        ("kernel", VMat(tuple(tuple(VInt(c) for c in row) for row in kernel), 2, 2)),
    ))
    src = (Path(__file__).parents[1] / "src/galdep/demos/convolve.fld").read_text()
    src = src.replace("convolve image kernel zero", f"convolve image kernel {method}")
    prog = load_program(src, file="convolve.fld")
    _, result = eval_term(env, prog.core)
    got = [[c.value for c in row] for row in result.cells]
    assert got == brute_force_convolve_with_method(image, kernel, method)
