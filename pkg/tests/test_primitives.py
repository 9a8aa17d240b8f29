"""Primitive operations and their dependency pairs."""

import itertools

import pytest

from galdep.lattice import TWO
from galdep.primitives import (
    PrimError, PrimOp, REGISTRY, default_bwd, default_fwd, gc_check_prim,
    get_prim, times_dep,
)
from galdep.syntax import VFlt, VInt, VStr


class TestDefaults:
    def test_plus_meet_and_replicate(self):
        plus = get_prim("+")
        fwd = plus.fwd_dep((VInt(1), VInt(2)))
        bwd = plus.bwd_dep((VInt(1), VInt(2)))
        assert fwd((True, False), TWO) is False
        assert bwd(False, TWO) == (False, False)
        assert bwd(True, TWO) == (True, True)

    def test_gc_laws_by_construction(self):
        for a, b in itertools.product([False, True], repeat=2):
            g = default_fwd((VInt(1), VInt(2)))((a, b), TWO)
            back = default_bwd((VInt(1), VInt(2)))(g, TWO)
            assert TWO.leq(back[0], a) and TWO.leq(back[1], b)
        for g in (False, True):
            fwd_back = default_fwd((VInt(1),))(default_bwd((VInt(1),))(g, TWO), TWO)
            assert TWO.leq(g, fwd_back)


class TestTimesAnnihilator:
    def test_one_zero_depends_only_on_it(self):
        fwd, bwd = times_dep((VInt(7), VInt(0)))
        assert fwd((False, True), TWO) is True
        assert fwd((True, False), TWO) is False
        assert bwd(True, TWO) == (False, True)

    def test_both_zero_symmetric(self):
        fwd, bwd = times_dep((VInt(0), VInt(0)))
        assert fwd((True, False), TWO) is False
        assert bwd(True, TWO) == (True, True)

    def test_nonzero_default(self):
        fwd, bwd = times_dep((VInt(3), VInt(4)))
        assert fwd((True, True), TWO) is True
        assert bwd(True, TWO) == (True, True)

    @pytest.mark.parametrize("args", [
        (VInt(7), VInt(0)), (VInt(0), VInt(7)), (VInt(0), VInt(0)),
        (VInt(3), VInt(4)), (VFlt(0.0), VFlt(2.0)),
    ])
    def test_gc_laws_exhaustive(self, args):
        report = gc_check_prim(get_prim("*"), args, TWO)
        assert report.ok, report.violations


class TestRegistry:
    def test_equality_on_strings(self):
        eq = get_prim("==")
        assert eq.apply((VStr("Hydro"), VStr("Hydro"))).value is True
        report = gc_check_prim(eq, (VStr("Hydro"), VStr("Hydro")), TWO)
        assert report.ok

    def test_concat(self):
        assert get_prim("++").apply((VStr("ab"), VStr("cd"))) == VStr("abcd")

    def test_quot_mod(self):
        assert get_prim("quot").apply((VInt(7), VInt(2))) == VInt(3)
        assert get_prim("mod").apply((VInt(-1), VInt(5))) == VInt(4)

    def test_to_float(self):
        assert get_prim("toFloat").apply((VInt(3),)) == VFlt(3.0)

    def test_kind_errors(self):
        with pytest.raises(PrimError):
            get_prim("+").apply((VStr("a"), VInt(1)))
        with pytest.raises(PrimError):
            get_prim("<").apply((VStr("a"), VInt(1)))

    def test_unknown(self):
        with pytest.raises(PrimError):
            get_prim("unknown-op")


def test_broken_pair_is_reported():
    """Negative control: a dependency pair that is not a Galois connection
    must produce violations."""

    def bad_fwd(args):
        def fwd(alphas, lat):
            return lat.top  # claims availability from nothing

        return fwd

    def bad_bwd(args):
        def bwd(alpha, lat):
            return (lat.top,) * len(args)  # and demands everything

        return bwd

    broken = PrimOp("broken", 2, lambda args: VInt(0), bad_fwd, bad_bwd)
    report = gc_check_prim(broken, (VInt(1), VInt(2)), TWO)
    assert not report.ok
    assert any(v.direction == "bwd_fwd" for v in report.violations)
    # the violating points are reported
    assert all(isinstance(v.point, tuple) for v in report.violations)


def test_every_registered_primitive_passes_on_grid():
    numeric = [(VInt(7), VInt(0)), (VInt(0), VInt(0)), (VInt(-2), VInt(5))]
    for op in REGISTRY.values():
        if op.arity == 1:
            grids = [(VInt(0),), (VInt(-3),)]
        elif op.name == "++":
            grids = [(VStr("a"), VStr("b"))]
        elif op.name in ("==", "/=", "<", "<=", ">", ">="):
            grids = numeric + [(VStr("Hydro"), VStr("Hydro"))]
        elif op.name in ("/", "quot", "mod"):
            grids = [(VInt(7), VInt(2))]
        else:
            grids = numeric
        for args in grids:
            assert gc_check_prim(op, args, TWO).ok, op.name


def test_dual_forward_dependency_preserves_joins():
    """The complemented forward dependency of every primitive preserves
    joins at every representative argument tuple (the linking pipeline
    composes through it)."""
    numeric = [(VInt(7), VInt(0)), (VInt(0), VInt(0)), (VInt(3), VInt(4))]
    for op in REGISTRY.values():
        if op.arity == 1:
            grids = [(VInt(0),), (VInt(5),)]
        elif op.name == "++":
            grids = [(VStr("a"), VStr("b"))]
        elif op.name in ("/", "quot", "mod"):
            grids = [(VInt(7), VInt(2))]
        else:
            grids = numeric
        for args in grids:
            fwd = op.fwd_dep(args)

            def dual(alphas):
                return not fwd(tuple(not a for a in alphas), TWO)

            for xs in itertools.product([False, True], repeat=op.arity):
                for ys in itertools.product([False, True], repeat=op.arity):
                    joined = tuple(x or y for x, y in zip(xs, ys))
                    assert dual(joined) == (dual(xs) or dual(ys)), (op.name, args)
