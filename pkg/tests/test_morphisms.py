"""Fractional and multiplicative elements, induced maps, the inner/scaling
relationship, and canonical composition of algebra maps."""

import random

import pytest

from incalg.algebra import IncidenceFunction, basis, delta, random_function, random_unit
from incalg.errors import BoundExceededError, NotMultiplicativeError
from incalg.fields import PrimeField, Rationals
from incalg.morphisms import (AlgebraMap, MultiplicativeElement,
                              compose_canonical, conjugation_search,
                              enumerate_multiplicative, fractional_element,
                              fractionality_gate, inner_equal, is_fractional,
                              mult_is_inner, transport, transport_mult,
                              unit_space_size, units_mod_center)
from incalg.posets import (ANTI, PosetMap, all_posets, automorphisms,
                           build_poset, involutions)

F3 = PrimeField(3)
F5 = PrimeField(5)
Q = Rationals()

CH2 = build_poset("ab", [("a", "b")])
DIAMOND = build_poset("abcd", [("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")])
CROWN = build_poset("abcd", [("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")])


def crown_sigma():
    return MultiplicativeElement.from_entries(
        CROWN, F3,
        {("a", "c"): 1, ("a", "d"): 1, ("b", "c"): 2, ("b", "d"): 1})


def test_transport_examples():
    flip = involutions(CH2)[0]
    f = IncidenceFunction.from_entries(
        CH2, F3, {("a", "a"): 1, ("b", "b"): 2, ("a", "b"): 1})
    moved = transport(flip, f)
    assert [moved.entries[p].value for p in CH2.pairs] == [2, 1, 1]
    assert transport(flip, moved) == f  # order two


def test_transport_is_anti_homomorphism():
    rng = random.Random(3)
    for poset in all_posets(4):
        for lam in involutions(poset):
            f = random_function(poset, F5, rng)
            g = random_function(poset, F5, rng)
            assert transport(lam, f * g) == transport(lam, g) * transport(lam, f)
    for poset in (DIAMOND, CROWN):
        for alpha in automorphisms(poset):
            f = random_function(poset, F5, rng)
            g = random_function(poset, F5, rng)
            assert transport(alpha, f * g) == \
                transport(alpha, f) * transport(alpha, g)


def test_fractional_example():
    tau = fractional_element(CH2, F5, {"a": 2, "b": 3})
    assert tau.value("a", "b").value == 4  # 2 * 3^-1 = 2 * 2
    ok, h = is_fractional(tau)
    assert ok
    assert all(tau.value(x, y) == h[x] / h[y] for x, y in CH2.pairs)


def test_fractional_rejects_zero_values():
    with pytest.raises(ValueError):
        fractional_element(CH2, F5, {"a": 0, "b": 1})
    with pytest.raises(ValueError):
        fractional_element(CH2, F5, {"a": 1})


def test_trivial_scaling():
    ones = MultiplicativeElement.ones(DIAMOND, F3)
    ok, h = is_fractional(ones)
    assert ok and all(v.is_one for v in h.values())
    f = delta(DIAMOND, F3)
    assert ones.scale_function(f) == f


def test_multiplicative_validation():
    with pytest.raises(NotMultiplicativeError):
        MultiplicativeElement.from_entries(CH2, F3, {("a", "b"): 0})
    c3 = build_poset("abc", [("a", "b"), ("b", "c")])
    with pytest.raises(NotMultiplicativeError):
        MultiplicativeElement.from_entries(
            c3, F3, {("a", "b"): 1, ("b", "c"): 1, ("a", "c"): 2})
    MultiplicativeElement.from_entries(
        c3, F3, {("a", "b"): 2, ("b", "c"): 2, ("a", "c"): 1})


def test_diamond_multiplicative_always_fractional():
    # the one cycle condition is exactly the product rule on the big interval
    sigmas = enumerate_multiplicative(DIAMOND, F3)
    assert len(sigmas) == 8  # 2^4 cover choices halved by the chain constraint
    for sigma in sigmas:
        ok, h = is_fractional(sigma)
        assert ok
        inner, unit = mult_is_inner(sigma)
        assert inner and unit.is_diagonal


def test_crown_counterexample():
    sigma = crown_sigma()
    ok, cycle = is_fractional(sigma)
    assert not ok
    assert len(cycle) == 4 and set(cycle) == set("abcd")
    inner, _ = mult_is_inner(sigma)
    assert not inner
    assert unit_space_size(CROWN, F3) == 648
    found, _ = conjugation_search(sigma)
    assert not found
    assert len(list(units_mod_center(CROWN, F3))) == 648


def test_crown_enumeration_counts():
    assert len(enumerate_multiplicative(CROWN, F3)) == 16  # no constraints
    fractional = [s for s in enumerate_multiplicative(CROWN, F3)
                  if is_fractional(s)[0]]
    assert len(fractional) == 8  # one cycle condition over {1, 2}


def test_fractional_agrees_with_conjugation_search():
    for poset in all_posets(4):
        if unit_space_size(poset, F3) > 2000:
            continue
        for sigma in enumerate_multiplicative(poset, F3):
            ok, _ = is_fractional(sigma)
            found, witness = conjugation_search(sigma)
            assert ok == found
            if found:
                assert AlgebraMap.inner(witness).table() == \
                    AlgebraMap.mult(sigma).table()


def test_componentwise_fractionality():
    poset = build_poset("abcdef", [("a", "b"), ("c", "d"), ("c", "e"),
                                   ("d", "f"), ("e", "f")])
    sigma = MultiplicativeElement.from_entries(
        poset, F3,
        {("a", "b"): 2, ("c", "d"): 1, ("c", "e"): 2, ("d", "f"): 2,
         ("e", "f"): 1, ("c", "f"): 2})
    ok, _ = is_fractional(sigma)
    parts = [is_fractional(sigma.restrict([j]))[0] for j in range(2)]
    assert ok == all(parts)
    tau = fractional_element(
        poset, F3, {x: 2 if x in "ab" else 1 for x in poset.elements})
    assert is_fractional(tau.restrict([0]))[0]
    assert tau.restrict([0]) == fractional_element(
        poset.components_subposet([0]), F3, {"a": 2, "b": 2})


def test_gate():
    assert fractionality_gate(DIAMOND, F3).holds
    assert fractionality_gate(DIAMOND, Q).holds
    report = fractionality_gate(CROWN, F3)
    assert not report.holds and report.component == 0
    assert not is_fractional(report.witness)[0]
    report_q = fractionality_gate(CROWN, Q)
    assert not report_q.holds
    assert not is_fractional(report_q.witness)[0]
    # chains and antichains are trees: gate holds over any field
    assert fractionality_gate(build_poset("abc", [("a", "b")]), Q).holds


def test_gate_matches_exhaustive_definition():
    for poset in all_posets(4):
        report = fractionality_gate(poset, F3)
        exhaustive = all(
            is_fractional(sigma)[0]
            for j in range(len(poset.components))
            for sigma in enumerate_multiplicative(
                poset.components_subposet([j]), F3))
        assert report.holds == exhaustive, poset


def test_all_comparable_shortcut_consistent():
    # crown plus a top: the gate holds although a cycle exists
    poset = build_poset("abcde", [("a", "c"), ("a", "d"), ("b", "c"),
                                  ("b", "d"), ("c", "e"), ("d", "e")])
    assert poset.all_comparable() == ("e",)
    assert fractionality_gate(poset, F3).holds
    for sigma in enumerate_multiplicative(poset, F3):
        assert is_fractional(sigma)[0]


def test_inner_equal_examples():
    poset = build_poset("abc", [("a", "b"), ("a", "c")])
    u = random_unit(poset, F5, random.Random(0))
    assert inner_equal(u, u)
    assert inner_equal(u, u.scale(2))
    v = delta(CH2, F3)
    w = IncidenceFunction.diagonal(CH2, F3, {"a": 1, "b": 2})
    assert not inner_equal(v, w)


def test_inner_equal_matches_map_equality():
    rng = random.Random(11)
    poset = build_poset("abcd", [("a", "b"), ("c", "d")])
    for _ in range(25):
        u = random_unit(poset, F3, rng)
        v = random_unit(poset, F3, rng)
        assert inner_equal(u, v) == \
            (AlgebraMap.inner(u).table() == AlgebraMap.inner(v).table())


def test_compose_inner_pair():
    rng = random.Random(2)
    u = random_unit(DIAMOND, F5, rng)
    v = random_unit(DIAMOND, F5, rng)
    composed = AlgebraMap.inner(u).compose(AlgebraMap.inner(v))
    assert composed == AlgebraMap.inner(u * v)


def test_compose_relabel_past_inner():
    rng = random.Random(4)
    alpha = automorphisms(DIAMOND)[1]
    u = random_unit(DIAMOND, F5, rng)
    lhs = AlgebraMap.induced(alpha, F5).compose(AlgebraMap.inner(u))
    rhs = AlgebraMap.inner(transport(alpha, u)).compose(
        AlgebraMap.induced(alpha, F5))
    assert lhs == rhs
    assert lhs.u is not None and lhs.phi is not None


def test_compose_transpose_past_inner():
    rng = random.Random(6)
    for poset in (CH2, DIAMOND):
        lam = involutions(poset)[0]
        u = random_unit(poset, F5, rng)
        lhs = AlgebraMap.induced(lam, F5).compose(AlgebraMap.inner(u))
        rhs = AlgebraMap.inner(transport(lam, u).inverse()).compose(
            AlgebraMap.induced(lam, F5))
        assert lhs == rhs


def test_involution_square_composes_to_inner():
    lam = involutions(CH2)[0]
    u = IncidenceFunction.from_entries(
        CH2, F3, {("a", "a"): 1, ("b", "b"): 1, ("a", "b"): 1})
    rho = AlgebraMap(CH2, F3, u=u, phi=lam)
    square = rho.compose(rho)
    assert square.phi is None or not square.anti
    expected = AlgebraMap.inner(u * transport(lam, u).inverse())
    assert square == expected


def test_compose_agrees_pointwise_with_sequence():
    rng = random.Random(8)
    lam = involutions(DIAMOND)[1]
    alpha = automorphisms(DIAMOND)[1]
    sigma = enumerate_multiplicative(DIAMOND, F5, 10**4)[5]
    maps = [
        AlgebraMap.inner(random_unit(DIAMOND, F5, rng)),
        AlgebraMap.mult(sigma),
        AlgebraMap.induced(lam, F5),
        AlgebraMap.induced(alpha, F5),
        AlgebraMap.inner(random_unit(DIAMOND, F5, rng)),
    ]
    composed = compose_canonical(maps)
    for e in basis(DIAMOND, F5):
        image = e
        for m in reversed(maps):
            image = m.apply(image)
        assert composed.apply(e) == image


def test_transport_mult_keeps_multiplicativity():
    lam = involutions(DIAMOND)[1]
    for sigma in enumerate_multiplicative(DIAMOND, F3):
        moved = transport_mult(lam, sigma)
        assert isinstance(moved, MultiplicativeElement)


def test_enumerate_multiplicative_bound():
    with pytest.raises(BoundExceededError):
        enumerate_multiplicative(CROWN, F3, bound=8)
    with pytest.raises(BoundExceededError):
        enumerate_multiplicative(CROWN, Q)
