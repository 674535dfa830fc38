"""Poset construction and map enumeration, checked against brute-force
bijection filters, plus the decompositions induced by order involutions."""

from itertools import permutations

import pytest

from incalg.errors import BoundExceededError, CycleError
from incalg.posets import (ANTI, AUTO, PosetMap, all_posets, anti_automorphisms,
                           automorphisms, build_poset, component_action,
                           conjugate_involutions, decompose_involution,
                           involutions)


def chain(n):
    labels = "abcdef"[:n]
    return build_poset(labels, list(zip(labels, labels[1:])))

def antichain(n):
    return build_poset("abcdef"[:n], [])

def diamond():
    return build_poset("abcd", [("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")])

def crown():
    return build_poset("abcd", [("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")])


def test_closure_example():
    p = build_poset("abc", [("a", "b"), ("b", "c")])
    assert p.le == frozenset(
        {("a", "a"), ("b", "b"), ("c", "c"), ("a", "b"), ("b", "c"), ("a", "c")})
    assert p.covers == frozenset({("a", "b"), ("b", "c")})


def test_build_rejections():
    with pytest.raises(CycleError):
        build_poset("ab", [("a", "b"), ("b", "a")])
    with pytest.raises(ValueError):
        build_poset("aab", [])
    with pytest.raises(ValueError):
        build_poset("ab", [("a", "z")])


def test_components():
    p = build_poset("abc", [("a", "b")])
    assert p.components == (("a", "b"), ("c",))
    assert p.comp_of["c"] == 1
    assert crown().components == (("a", "b", "c", "d"),)


def test_intervals():
    c3 = chain(3)
    assert c3.interval("a", "c") == ("a", "b", "c")
    assert c3.interval("c", "a") == ()
    assert diamond().interval("a", "d") == ("a", "b", "c", "d")
    with pytest.raises(ValueError):
        c3.interval("a", "z")


def test_all_comparable():
    assert chain(3).all_comparable() == ("a", "b", "c")
    assert diamond().all_comparable() == ("a", "d")
    assert antichain(2).all_comparable() == ()
    assert crown().all_comparable() == ()


def brute_maps(poset, anti, order_two):
    """Oracle: filter all bijections directly by the order law."""
    found = []
    elems = poset.elements
    for perm in permutations(elems):
        mapping = dict(zip(elems, perm))
        ok = True
        for x in elems:
            for y in elems:
                image = poset.leq(mapping[y], mapping[x]) if anti \
                    else poset.leq(mapping[x], mapping[y])
                if poset.leq(x, y) != image:
                    ok = False
                    break
            if not ok:
                break
        if ok and order_two and any(mapping[mapping[x]] != x for x in elems):
            ok = False
        if ok:
            found.append(mapping)
    return found


def test_enumerations_match_bruteforce():
    for poset in all_posets(4):
        for anti, order_two, enum in (
            (False, False, automorphisms),
            (True, False, anti_automorphisms),
            (True, True, involutions),
        ):
            got = [m.mapping for m in enum(poset)]
            want = brute_maps(poset, anti, order_two)
            assert sorted(got, key=sorted) == sorted(want, key=sorted), poset


def test_enumeration_examples():
    assert [m.mapping for m in involutions(chain(3))] == \
        [{"a": "c", "c": "a", "b": "b"}]
    assert len(involutions(antichain(2))) == 2  # identity and the swap
    assert [m.mapping for m in automorphisms(chain(3))] == \
        [{"a": "a", "b": "b", "c": "c"}]
    assert len(automorphisms(diamond())) == 2
    assert len(involutions(crown())) == 2


def test_identity_is_involution_only_on_antichains():
    ident = PosetMap.identity(antichain(3))
    assert ident.is_involution()
    assert not PosetMap.identity(chain(2)).is_involution()


def test_enumeration_group_closure():
    for poset in (diamond(), crown(), antichain(3)):
        autos = automorphisms(poset)
        listed = {m._items for m in autos}
        for f in autos:
            assert f.inverse()._items in listed
            for g in autos:
                assert f.compose(g)._items in listed


def test_size_bound():
    poset = build_poset("abcdefghijk", [])  # 11 elements
    with pytest.raises(BoundExceededError):
        automorphisms(poset)
    with pytest.raises(BoundExceededError):
        involutions(poset)


def test_map_validation():
    c2 = chain(2)
    with pytest.raises(ValueError):
        PosetMap(c2, {"a": "a", "b": "a"}, AUTO)
    with pytest.raises(ValueError):
        PosetMap(c2, {"a": "b", "b": "a"}, AUTO)  # swap reverses the chain
    PosetMap(c2, {"a": "b", "b": "a"}, ANTI)


def test_decomposition_examples():
    c3 = chain(3)
    dec = decompose_involution(c3, involutions(c3)[0])
    assert (dec.lower, dec.upper, dec.fixed) == \
        (frozenset("a"), frozenset("c"), frozenset("b"))

    a2 = antichain(2)
    ident = next(m for m in involutions(a2) if m.is_identity())
    swap = next(m for m in involutions(a2) if not m.is_identity())
    di = decompose_involution(a2, ident)
    assert di.fixed == frozenset("ab") and not di.lower and not di.upper
    ds = decompose_involution(a2, swap)
    assert ds.lower == frozenset("a") and ds.upper == frozenset("b")


def test_decomposition_conditions_hold_everywhere():
    for poset in all_posets(4):
        for lam in involutions(poset):
            dec = decompose_involution(poset, lam)
            assert dec.fixed == frozenset(
                x for x in poset.elements if lam(x) == x)
            for x in dec.lower:
                assert lam(x) in dec.upper
                assert set(poset.down[x]) <= dec.lower
            for x in dec.upper:
                assert lam(x) in dec.lower
                assert set(poset.up[x]) <= dec.upper


def test_no_element_between_two_fixed_points():
    for poset in all_posets(4):
        for lam in involutions(poset):
            for x in poset.elements:
                if lam(x) == x:
                    continue
                below = any(lam(y) == y for y in poset.down[x] if y != x)
                above = any(lam(y) == y for y in poset.up[x] if y != x)
                assert not (below and above)


def test_component_action_examples():
    two_chains = build_poset("abcd", [("a", "b"), ("c", "d")])
    cross = next(m for m in involutions(two_chains) if m("a") == "d")
    act = component_action(two_chains, cross)
    assert act.perm == (1, 0) and act.fixed == ()

    c3 = chain(3)
    act3 = component_action(c3, involutions(c3)[0])
    assert act3.fixed == (0,)
    assert act3.psets[0] == (("a",), ("c",), ("b",))
    assert act3.fixed_point_free == ()

    c2 = chain(2)
    act2 = component_action(c2, involutions(c2)[0])
    assert act2.fixed == (0,) and act2.fixed_point_free == (0,)


def test_component_images_follow_action():
    for poset in all_posets(4):
        for lam in involutions(poset):
            act = component_action(poset, lam)
            for j, comp in enumerate(poset.components):
                assert {lam(x) for x in comp} == \
                    set(poset.components[act.perm[j]])


def test_conjugate_involutions():
    a2 = antichain(2)
    ident = next(m for m in involutions(a2) if m.is_identity())
    swap = next(m for m in involutions(a2) if not m.is_identity())
    assert conjugate_involutions(ident, swap) == (False, None)
    ok, alpha = conjugate_involutions(swap, swap)
    assert ok and alpha.is_identity()

    a3 = antichain(3)
    ab = PosetMap(a3, {"a": "b", "b": "a", "c": "c"}, ANTI)
    bc = PosetMap(a3, {"a": "a", "b": "c", "c": "b"}, ANTI)
    ok, alpha = conjugate_involutions(ab, bc)
    assert ok
    assert alpha.compose(ab) == bc.compose(alpha)

    two_chains = build_poset("abcd", [("a", "b"), ("c", "d")])
    inplace = next(m for m in involutions(two_chains) if m("a") == "b")
    cross = next(m for m in involutions(two_chains) if m("a") == "d")
    assert conjugate_involutions(inplace, cross)[0] is False


def test_corpus_counts():
    corpus = all_posets(5)
    by_size = [sum(1 for p in corpus if p.size == n) for n in range(1, 6)]
    assert by_size == [1, 2, 5, 16, 63]
    with pytest.raises(BoundExceededError):
        all_posets(7)
