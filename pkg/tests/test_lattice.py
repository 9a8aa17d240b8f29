"""Lattice axioms, exhaustively on the small instances."""

import itertools

import pytest
from hypothesis import given, strategies as st

from galdep.lattice import (
    BitVecLattice, LatticeMismatchError, TWO, UNIT, lattice_from_spec,
)


def all_pairs(lat):
    elems = lat.elements()
    return itertools.product(elems, repeat=2)


@pytest.mark.parametrize("lat", [TWO, BitVecLattice(2), BitVecLattice(3)],
                         ids=["two", "bitvec2", "bitvec3"])
class TestBoundedLatticeAxioms:
    def test_meet_join_commutative_idempotent(self, lat):
        for a, b in all_pairs(lat):
            assert lat.meet(a, b) == lat.meet(b, a)
            assert lat.join(a, b) == lat.join(b, a)
        for a in lat.elements():
            assert lat.meet(a, a) == a
            assert lat.join(a, a) == a

    def test_associative(self, lat):
        for a, b, c in itertools.product(lat.elements(), repeat=3):
            assert lat.meet(lat.meet(a, b), c) == lat.meet(a, lat.meet(b, c))
            assert lat.join(lat.join(a, b), c) == lat.join(a, lat.join(b, c))

    def test_units(self, lat):
        for a in lat.elements():
            assert lat.meet(lat.top, a) == a
            assert lat.join(lat.bot, a) == a

    def test_absorption(self, lat):
        for a, b in all_pairs(lat):
            assert lat.join(a, lat.meet(a, b)) == a
            assert lat.meet(a, lat.join(a, b)) == a

    def test_distributivity(self, lat):
        for a, b, c in itertools.product(lat.elements(), repeat=3):
            assert lat.meet(a, lat.join(b, c)) == lat.join(lat.meet(a, b), lat.meet(a, c))

    def test_complementation_and_de_morgan(self, lat):
        for a in lat.elements():
            assert lat.neg(lat.neg(a)) == a
            assert lat.meet(a, lat.neg(a)) == lat.bot
            assert lat.join(a, lat.neg(a)) == lat.top
        for a, b in all_pairs(lat):
            assert lat.meet(lat.neg(a), lat.neg(b)) == lat.neg(lat.join(a, b))
            assert lat.join(lat.neg(a), lat.neg(b)) == lat.neg(lat.meet(a, b))

    def test_leq_partial_order(self, lat):
        elems = lat.elements()
        for a in elems:
            assert lat.leq(a, a)
        for a, b in all_pairs(lat):
            if lat.leq(a, b) and lat.leq(b, a):
                assert a == b
        for a, b, c in itertools.product(elems, repeat=3):
            if lat.leq(a, b) and lat.leq(b, c):
                assert lat.leq(a, c)

    def test_leq_agrees_with_meet_and_join(self, lat):
        for a, b in all_pairs(lat):
            assert lat.leq(a, b) == (lat.meet(a, b) == a)
            assert lat.leq(a, b) == (lat.join(a, b) == b)


def test_two_examples():
    assert TWO.meet(True, False) is False
    assert TWO.meet(True, True) is True
    assert TWO.join(False, False) is False
    assert TWO.join(True, False) is True
    assert TWO.neg(True) is False
    assert TWO.neg(TWO.neg(False)) is False


def test_bitvec_examples():
    b3 = BitVecLattice(3)
    assert b3.meet((True, True, False), (False, True, True)) == (False, True, False)
    assert b3.join((True, True, False), (False, True, True)) == (True, True, True)
    b2 = BitVecLattice(2)
    assert b2.neg((True, False)) == (False, True)


def test_mixing_is_an_error():
    with pytest.raises(LatticeMismatchError):
        TWO.meet(True, (True, False))
    with pytest.raises(LatticeMismatchError):
        BitVecLattice(2).meet((True, False), (True, False, True))
    with pytest.raises(LatticeMismatchError):
        UNIT.join(None, True)


@given(st.integers(min_value=1, max_value=6), st.data())
def test_bitvec_laws_random(width, data):
    lat = BitVecLattice(width)
    bits = st.tuples(*([st.booleans()] * width))
    a = data.draw(bits)
    b = data.draw(bits)
    assert lat.leq(lat.meet(a, b), a)
    assert lat.leq(a, lat.join(a, b))
    assert lat.neg(lat.neg(a)) == a


def test_lattice_from_spec():
    assert lattice_from_spec(None) is TWO
    assert lattice_from_spec("two") is TWO
    assert lattice_from_spec(3).width == 3
    assert lattice_from_spec("bitvec:4").width == 4
    with pytest.raises(ValueError):
        lattice_from_spec("nope")


def test_json_wire_forms():
    assert TWO.to_json(True) is True
    assert TWO.from_json(False) is False
    b2 = BitVecLattice(2)
    assert b2.to_json((True, False)) == [True, False]
    assert b2.from_json([False, True]) == (False, True)
