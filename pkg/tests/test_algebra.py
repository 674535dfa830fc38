"""Convolution, inversion, center and restriction, against hand-computed
values and seeded random property checks."""

import random

import pytest

from incalg.algebra import (IncidenceFunction, basis, center_basis,
                            center_by_commutant, delta, random_function,
                            random_unit)
from incalg.errors import FieldMismatchError, NotInvertibleError
from incalg.fields import PrimeField, Rationals
from incalg.posets import all_posets, build_poset

F3 = PrimeField(3)
F5 = PrimeField(5)
Q = Rationals()

CH2 = build_poset("ab", [("a", "b")])


def rand_poset(rng, n):
    labels = "abcdef"[:n]
    pairs = [(labels[i], labels[j])
             for i in range(n) for j in range(i + 1, n) if rng.random() < 0.4]
    return build_poset(labels, pairs)


def test_delta_is_unity_and_central():
    d = delta(CH2, F3)
    assert d.entries[("a", "a")].is_one and d.entries[("a", "b")].is_zero
    assert d * d == d
    assert d.is_central
    rng = random.Random(1)
    f = random_function(CH2, F3, rng)
    assert d * f == f and f * d == f


def test_hand_convolution():
    f = IncidenceFunction.from_entries(
        CH2, F3, {("a", "a"): 1, ("b", "b"): 2, ("a", "b"): 1})
    fg = f * f
    assert [fg.entries[p].value for p in CH2.pairs] == [1, 1, 0]


def test_hand_inverse():
    f = IncidenceFunction.from_entries(
        CH2, F3, {("a", "a"): 1, ("b", "b"): 2, ("a", "b"): 1})
    g = f.inverse()
    assert [g.entries[p].value for p in CH2.pairs] == [1, 2, 1]
    assert f * g == delta(CH2, F3) and g * f == delta(CH2, F3)
    assert delta(CH2, F3).inverse() == delta(CH2, F3)


def test_diagonal_inverse():
    d = IncidenceFunction.diagonal(CH2, F5, {"a": 2, "b": 3})
    inv = d.inverse()
    assert inv.entries[("a", "a")].value == 3 and inv.entries[("b", "b")].value == 2


def test_not_invertible_reports_witness():
    f = IncidenceFunction.from_entries(CH2, F3, {("a", "a"): 1, ("b", "b"): 0})
    assert not f.is_unit
    with pytest.raises(NotInvertibleError) as err:
        f.inverse()
    assert err.value.element == "b"


def test_mismatch_rejected():
    f = delta(CH2, F3)
    with pytest.raises(FieldMismatchError):
        f * delta(CH2, F5)
    other = build_poset("ab", [])
    with pytest.raises(ValueError):
        f * delta(other, F3)


def test_associativity_and_inverse_roundtrip_random():
    for fld in (F3, F5, Q):
        rng = random.Random(42)
        for _ in range(60):
            poset = rand_poset(rng, rng.randint(2, 6))
            f = random_function(poset, fld, rng)
            g = random_function(poset, fld, rng)
            h = random_function(poset, fld, rng)
            assert (f * g) * h == f * (g * h)
            u = random_unit(poset, fld, rng)
            d = delta(poset, fld)
            assert u * u.inverse() == d and u.inverse() * u == d


def test_center_examples():
    mixed = build_poset("abc", [("a", "b")])
    cb = center_basis(mixed, F3)
    assert len(cb) == 2
    assert all(v.is_central for v in cb)

    connected = build_poset("abc", [("a", "b"), ("a", "c")])
    assert len(center_basis(connected, F3)) == 1

    f = IncidenceFunction.diagonal(connected, F3, {"a": 1, "b": 2, "c": 1})
    assert f.is_diagonal and not f.is_central


def test_center_matches_commutant_small():
    for poset in all_posets(4):
        for fld in (F3, Q):
            commutant = center_by_commutant(poset, fld)
            assert len(commutant) == len(poset.components)
            assert all(v.is_central for v in commutant)
            for v in center_basis(poset, fld):
                assert all(v * e == e * v for e in basis(poset, fld))


def test_restriction_identities():
    poset = build_poset("abcd", [("a", "b"), ("c", "d")])
    rng = random.Random(5)
    for _ in range(30):
        f = random_function(poset, F5, rng)
        g = random_function(poset, F5, rng)
        for indices in ([0], [1]):
            assert (f + g).restrict(indices) == \
                f.restrict(indices) + g.restrict(indices)
            assert (f * g).restrict(indices) == \
                f.restrict(indices) * g.restrict(indices)
            assert f.scale(3).restrict(indices) == f.restrict(indices).scale(3)
        u = random_unit(poset, F5, rng)
        assert u.inverse().restrict([0]) == u.restrict([0]).inverse()
        assert u.restrict([0]).is_unit and u.restrict([1]).is_unit


def test_unit_iff_componentwise_units():
    poset = build_poset("abc", [("a", "b")])
    f = IncidenceFunction.diagonal(poset, F3, {"a": 1, "b": 1, "c": 0})
    assert not f.is_unit
    assert f.restrict([0]).is_unit and not f.restrict([1]).is_unit


def test_central_iff_componentwise_central():
    poset = build_poset("abcd", [("a", "b"), ("c", "d")])
    f = IncidenceFunction.diagonal(poset, F3, {"a": 2, "b": 2, "c": 1, "d": 1})
    assert f.is_central
    assert f.restrict([0]).is_central and f.restrict([1]).is_central
    g = IncidenceFunction.diagonal(poset, F3, {"a": 2, "b": 1, "c": 1, "d": 1})
    assert not g.is_central and not g.restrict([0]).is_central


def test_componentwise_split_is_algebra_map():
    poset = build_poset("abcde", [("a", "b"), ("c", "d"), ("c", "e")])
    rng = random.Random(9)
    for _ in range(25):
        f = random_function(poset, F3, rng)
        g = random_function(poset, F3, rng)
        whole = f * g
        for j in range(len(poset.components)):
            assert whole.restrict([j]) == f.restrict([j]) * g.restrict([j])
        assert (f + g).restrict([0, 1]) == \
            f.restrict([0, 1]) + g.restrict([0, 1])


def test_basis_order_deterministic():
    poset = build_poset("abc", [("a", "b"), ("a", "c")])
    pairs = [next(p for p, v in e.entries.items() if not v.is_zero)
             for e in basis(poset, F3)]
    assert pairs == list(poset.pairs)
    assert poset.pairs[:3] == (("a", "a"), ("b", "b"), ("c", "c"))


def test_restriction_rejects_empty():
    f = delta(CH2, F3)
    with pytest.raises(ValueError):
        f.restrict([])


def test_entries_outside_relation_rejected():
    with pytest.raises(ValueError):
        IncidenceFunction.from_entries(CH2, F3, {("b", "a"): 1})
