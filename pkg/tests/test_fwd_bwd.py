"""Rule-level behavior of the forward and backward analyses."""

from galdep.bwd import close_defs_bwd, env_lookup_bwd, eval_bwd, match_bwd
from galdep.evaluator import MBool, MCons, MNil, MVar, eval_term
from galdep.fwd import close_defs_fwd, eval_fwd, match_fwd
from galdep.lattice import BitVecLattice, TWO
from galdep.syntax import (
    App, Bool, ElimBool, ElimList, ElimVar, Env, HOLE, Hole, Int, Lam,
    PrimApp, Proj, Rec, Var, VBool, VClosure, VCons, VInt, VNil, VRec,
    erase, expand_hole, hole_eq, leq_sel, top_of,
)


class TestForwardEval:
    def test_literal_meets_ambient(self):
        t, _ = eval_term(Env(), Int(5))
        assert eval_fwd(t, Env(), Int(5, True), True, TWO) == VInt(5, True)
        assert eval_fwd(t, Env(), Int(5, True), False, TWO) == VInt(5, False)
        assert eval_fwd(t, Env(), Int(5, False), True, TWO) == VInt(5, False)

    def test_variable_lookup_ignores_ambient(self):
        env = Env((("x", VInt(3)),))
        t, _ = eval_term(env, Var("x"))
        sel = Env((("x", VInt(3, True)),))
        assert eval_fwd(t, sel, Var("x"), False, TWO) == VInt(3, True)

    def test_projection_ignores_container(self):
        env = Env((("r", VRec((("a", VInt(1)),))),))
        t, _ = eval_term(env, Proj(Var("r"), "a"))
        sel = Env((("r", VRec((("a", VInt(1, True)),), False)),))
        assert eval_fwd(t, sel, Proj(Var("r"), "a"), True, TWO) == VInt(1, True)

    def test_all_top_gives_top(self):
        cases = [
            (Env((("x", VInt(2)),)), PrimApp("+", (Var("x"), Int(3)))),
            (Env(), App(Lam(ElimBool(Int(1), Int(2))), Bool(True))),
            (Env((("l", VCons(VInt(1), VNil()),),)), Var("l")),
        ]
        for raw_env, raw_term in cases:
            t, result = eval_term(raw_env, raw_term)
            out = eval_fwd(t, top_of(raw_env, TWO), top_of(raw_term, TWO), True, TWO)
            assert out == top_of(result, TWO)

    def test_hole_term_is_expanded(self):
        env = Env((("x", VInt(3)),))
        t, _ = eval_term(env, PrimApp("+", (Var("x"), Int(1))))
        out = eval_fwd(t, Env((("x", VInt(3, True)),)), HOLE, True, TWO)
        assert out == VInt(4, False)  # literal 1 unselected under the hole


class TestForwardMatch:
    def test_var_availability_is_top(self):
        rho, kappa, avail = match_fwd(MVar("x"), VInt(5, False), ElimVar("x", Int(1, True)), TWO)
        assert rho == (("x", VInt(5, False)),)
        assert kappa == Int(1, True)
        assert avail is True

    def test_bool_availability_is_annotation(self):
        rho, kappa, avail = match_fwd(MBool(True), VBool(True, False),
                                      ElimBool(Int(1, True), Int(2, True)), TWO)
        assert rho == () and kappa == Int(1, True) and avail is False

    def test_cons_composed_by_hand(self):
        # match [5] against the list eliminator whose cons branch binds the
        # head and eliminates the tail; derived by composing the cons,
        # variable and nil rules by hand
        w = MCons(MVar("x"), MNil())
        v = VCons(VInt(5, True), VNil(True), False)
        sigma = ElimList(HOLE, ElimVar("x", ElimList(Int(9, True), HOLE)))
        rho, kappa, avail = match_fwd(w, v, sigma, TWO)
        assert rho == (("x", VInt(5, True)),)
        assert kappa == Int(9, True)
        # alpha_cons meet tt (variable) meet alpha_nil
        assert avail is False
        v2 = VCons(VInt(5, True), VNil(True), True)
        assert match_fwd(w, v2, sigma, TWO)[2] is True


class TestBackwardEval:
    def test_literal_demand(self):
        env = Env((("x", VInt(1)),))
        t, _ = eval_term(env, Int(5))
        rho, e, amb = eval_bwd(t, VInt(5, True), TWO)
        assert hole_eq(rho, env.bot_like(), TWO)
        assert e == Int(5, True)
        assert amb is True

    def test_bottom_maps_to_bottom(self):
        env = Env((("x", VInt(2)),))
        t, result = eval_term(env, PrimApp("*", (Var("x"), Int(3))))
        for demand in (HOLE, VInt(result.value, False)):
            rho, e, amb = eval_bwd(t, demand, TWO)
            assert hole_eq(rho, env.bot_like(), TWO)
            assert hole_eq(e, HOLE, TWO)
            assert amb is False

    def test_projection_never_demands_container(self):
        env = Env((("r", VRec((("a", VInt(1)), ("b", VInt(2))))),))
        t, _ = eval_term(env, Proj(Var("r"), "a"))
        rho, e, amb = eval_bwd(t, VInt(1, True), TWO)
        rec = rho.lookup("r")
        assert rec.ann is False
        assert rec.fields[0][1] == VInt(1, True)
        assert isinstance(rec.fields[1][1], Hole)


class TestBackwardMatch:
    def test_var_disregards_ambient(self):
        sigma = ElimVar("x", Int(1))
        v, sig = match_bwd(MVar("x"), (("x", VInt(5, True)),), Int(1, False), True,
                           sigma, TWO)
        assert v == VInt(5, True)
        assert sig == ElimVar("x", Int(1, False))

    def test_bool_puts_hole_on_untaken_branch(self):
        sigma = ElimBool(Int(1), Int(2))
        v, sig = match_bwd(MBool(True), (), Int(1, True), True, sigma, TWO)
        assert v == VBool(True, True)
        assert sig == ElimBool(Int(1, True), HOLE)

    def test_cons_composed_by_hand(self):
        w = MCons(MVar("x"), MNil())
        untaken = ElimVar("h", ElimVar("t", Int(1)))
        raw_sigma = ElimList(Int(0), ElimVar("x", ElimList(Int(9), untaken)))
        v, sig = match_bwd(w, (("x", VInt(7, True)),), Int(9, False), True,
                           raw_sigma, TWO)
        assert v == VCons(VInt(7, True), VNil(True), True)
        assert sig == ElimList(HOLE, ElimVar("x", ElimList(Int(9, False), HOLE)))


class TestEnvLookupBwd:
    def test_single(self):
        raw = Env((("x", VInt(5)),))
        out = env_lookup_bwd(raw, "x", VInt(5, True))
        assert out.entries == (("x", VInt(5, True)),)

    def test_shadowing_hits_recent(self):
        raw = Env((("x", VInt(1)), ("x", VInt(2))))
        out = env_lookup_bwd(raw, "x", VInt(2, True))
        assert isinstance(out.entries[0][1], Hole)
        assert out.entries[1][1] == VInt(2, True)

    def test_hole_demand_gives_hole_env(self):
        raw = Env((("x", VInt(1)), ("y", VInt(2))))
        out = env_lookup_bwd(raw, "y", HOLE)
        assert hole_eq(out, raw.bot_like(), TWO)


class TestCloseDefs:
    def test_fwd_empty(self):
        assert close_defs_fwd(Env(), (), False, TWO) == Env()

    def test_fwd_captures_ambient(self):
        env_sel = Env((("y", VInt(1, True)),))
        defs = (("f", ElimVar("x", Int(1, False))),)
        out = close_defs_fwd(env_sel, defs, False, TWO)
        clo = out.entries[0][1]
        assert clo.ann is False and clo.env is env_sel

    def test_bwd_all_holes(self):
        raw_env = Env((("y", VInt(1)),))
        raw_defs = (("f", ElimVar("x", Int(1))),)
        rho2 = Env((("f", HOLE),))
        env_b, h_b, amb = close_defs_bwd(rho2, raw_env, raw_defs, TWO)
        assert hole_eq(env_b, raw_env.bot_like(), TWO)
        assert all(isinstance(e, Hole) for _, e in h_b)
        assert amb is False

    def test_bwd_single_closure(self):
        raw_env = Env((("y", VInt(1)),))
        raw_defs = (("f", ElimVar("x", Int(1))),)
        captured = Env((("y", VInt(1, True)),))
        sel_elim = ElimVar("x", Int(1, True))
        rho2 = Env((("f", VClosure(captured, (("f", HOLE),), sel_elim, ann=True)),))
        env_b, h_b, amb = close_defs_bwd(rho2, raw_env, raw_defs, TWO)
        assert env_b == captured
        assert h_b[0] == ("f", sel_elim)
        assert amb is True


def test_bitvec_multicolor_selection():
    """Two independent colors flow through one backward pass."""
    lat = BitVecLattice(2)
    env = Env((("a", VInt(1)), ("b", VInt(2))))
    term = Rec((("x", Var("a")), ("y", Var("b"))), None)
    t, result = eval_term(env, term)
    sel = VRec((("x", VInt(1, (True, False))), ("y", VInt(2, (False, True)))),
               (False, False))
    rho, e, amb = eval_bwd(t, sel, lat)
    assert rho.lookup("a").ann == (True, False)
    assert rho.lookup("b").ann == (False, True)
