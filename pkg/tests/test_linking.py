"""De Morgan dualization and output-to-output linking."""

import itertools

import pytest

from galdep.bwd import eval_bwd
from galdep.engine import open_demo
from galdep.evaluator import eval_term
from galdep.lattice import TWO, UNIT
from galdep.linking import (
    LinkSpec, bwd_dual, fwd_dual, link, make_link_spec, payload_only,
)
from galdep.paths import parse_selection_doc
from galdep.syntax import (
    Cons, Env, HOLE, Hole, Int, LatticeNotBooleanError, PrimApp, Var, VCons,
    VInt, VNil, bot_of, count_positions, erase, hole_eq, leq_sel, top_of,
    with_positions,
)


def simple_program():
    from galdep.syntax import Nil

    env = Env((("x", VInt(2)), ("y", VInt(5))))
    term = Cons(PrimApp("*", (Var("x"), Int(3))), Cons(Var("y"), Nil(None), None), None)
    trace, result = eval_term(env, term)
    return env, term, trace, result


class TestDuals:
    def test_bot_maps_to_bot(self):
        env, term, trace, result = simple_program()
        out = fwd_dual(trace, env.bot_like(), HOLE, False, env, term, TWO)
        assert hole_eq(out, bot_of(result, TWO), TWO)
        rho, e, amb = bwd_dual(trace, HOLE, env, term, result, TWO)
        assert hole_eq(rho, env.bot_like(), TWO)
        assert amb is False

    def test_requires_boolean_lattice(self):
        env, term, trace, result = simple_program()
        with pytest.raises(LatticeNotBooleanError):
            fwd_dual(trace, env.bot_like(), HOLE, None, env, term, UNIT)

    def test_dual_flips_sufficiency_into_necessity(self):
        # selecting x makes exactly the first cell (x * 3) dependent on it
        env, term, trace, result = simple_program()
        sel_env = Env((("x", VInt(2, True)), ("y", HOLE)))
        out = fwd_dual(trace, sel_env, HOLE, False, env, term, TWO)
        assert out.head.ann is True
        assert out.tail.head.ann is False


@pytest.fixture(scope="module")
def spec():
    from galdep.surface import load_program

    data = Env((("xs", VCons(VInt(1), VCons(VInt(2), VNil()))),))
    view1 = load_program("[ x * 10 | x <- xs ]").core
    view2 = load_program("[ x + 1 | x <- xs ]").core
    return make_link_spec(data, [("tens", view1), ("succ", view2)])


class TestLink:

    def test_bot_selection_links_to_bot(self, spec):
        res = link(spec, "tens", "succ", HOLE, TWO)
        assert hole_eq(res.data_sel, spec.data.bot_like(), TWO)
        assert hole_eq(res.other_sel, bot_of(spec.view("succ").result, TWO), TWO)

    def test_element_links_to_matching_element(self, spec):
        result1 = spec.view("tens").result
        sel = with_positions(erase(result1), [False, True, False, False, False])
        res = link(spec, "tens", "succ", sel, TWO)
        # element 1 of view 1 needs xs[0]; succ element 1 needs it too
        assert res.data_sel.lookup("xs").head.ann is True
        assert res.other_sel.head.ann is True
        assert res.other_sel.tail.head.ann is False

    def test_equals_manual_composition(self, spec):
        src = spec.view("tens")
        dst = spec.view("succ")
        raw_out = erase(src.result)
        n = count_positions(raw_out)
        for bits in itertools.product([False, True], repeat=min(n, 6)):
            sel = with_positions(raw_out, list(bits) + [False] * (n - len(bits)))
            res = link(spec, "tens", "succ", sel, TWO)
            env_d, _, _ = eval_bwd(src.trace, sel, TWO)
            from galdep.linking import restrict_to_shared
            from galdep.syntax import expand_hole

            data_sel = payload_only(
                expand_hole(restrict_to_shared(env_d, spec.data), spec.data, TWO), TWO)
            manual = fwd_dual(dst.trace, data_sel, HOLE, False, dst.env, dst.term, TWO)
            assert hole_eq(res.other_sel, manual, TWO)

    def test_composite_galois_inequalities_on_flat_data(self, spec):
        """The composite (dual-forward after backward) is the lower adjoint
        of a Galois connection between the two output lattices; its upper
        adjoint is forward on view 1 after dual-backward on view 2. Both
        inequalities are checked exhaustively on content positions (the
        shared data here is all atoms, so the structural mask is the
        identity)."""
        from galdep.fwd import eval_fwd
        from galdep.linking import restrict_to_shared
        from galdep.syntax import expand_hole, top_of

        src = spec.view("tens")
        dst = spec.view("succ")
        raw1 = erase(src.result)
        raw2 = erase(dst.result)

        def lower(sel1):
            return link(spec, "tens", "succ", sel1, TWO).other_sel

        def upper(sel2):
            env_d, _t, _a = bwd_dual(dst.trace, sel2, dst.env, dst.term,
                                     dst.result, TWO)
            d = payload_only(restrict_to_shared(env_d, spec.data), TWO)
            d = expand_hole(d, spec.data, TWO)
            return eval_fwd(src.trace, d, top_of(src.term, TWO), TWO.top, TWO)

        for bits in itertools.product([False, True], repeat=count_positions(raw1)):
            sel1 = with_positions(raw1, list(bits))
            assert leq_sel(payload_sel_only(sel1),
                           payload_sel_only(upper(lower(sel1))), TWO)
        for bits in itertools.product([False, True], repeat=count_positions(raw2)):
            sel2 = with_positions(raw2, list(bits))
            assert leq_sel(payload_sel_only(lower(upper(sel2))),
                           payload_sel_only(sel2), TWO)


def payload_sel_only(sel):
    return payload_only(sel, TWO)


class TestLinkDemos:
    def test_convolution_pair_matches_stencil_oracle(self):
        session = open_demo("convolve-pair")
        res = session.link(parse_selection_doc("{cell: [2,2]}"), from_view="embossed")
        got = sorted(
            tuple(p["path"][0]["cell"]) for p in res["other_doc"]["paths"]
            if isinstance(p["path"][0], dict) and "cell" in p["path"][0]
        )
        demanded = {(i, j) for i in (1, 2, 3) for j in (1, 2, 3)} - {(1, 3), (3, 1)}
        sharpen = [[0, -1, 0], [-1, 5, -1], [0, -1, 0]]

        def stencil_hits(x, y):
            for s in range(3):
                for t in range(3):
                    if sharpen[s][t] == 0:
                        continue
                    u, v = x + s - 1, y + t - 1
                    if (u, v) in demanded:
                        return True
            return False

        oracle = sorted((x, y) for x in range(1, 6) for y in range(1, 6)
                        if stencil_hits(x, y))
        assert got == oracle

    def test_energy_pair_links_bar_to_points(self):
        session = open_demo("energy-pair")
        res = session.link(parse_selection_doc([{"index": 1}, {"field": "height"}]),
                           from_view="bars")
        # first bar is the first Hydro row (row 2 of the table)
        table = res["data"]["table"]
        row2 = table["tail"]["head"]
        assert any(f[1].get("ann") for f in row2["fields"])
        paths = res["other_doc"]["paths"]
        assert all(p["path"][0] == "tail" for p in paths)

    def test_nothing_links_to_nothing(self):
        session = open_demo("energy-pair")
        res = session.link(parse_selection_doc([]), from_view="bars")
        assert res["other_doc"]["paths"] == []
