"""Equivalence of algebra involutions: exhaustive oracle, reduction-based
fast path, class counting by formula and by enumeration, general (non-inner)
equivalence, and an executable verification battery."""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field as dc_field

from .algebra import (IncidenceFunction, basis, center_basis,
                      center_by_commutant, delta, random_function, random_unit)
from .errors import (BoundExceededError, InfiniteClassCountError,
                     LambdaMismatchError, MultiplicativeGateError)
from .fields import PrimeField
from .involutions import (Involution, balancing_unit, base_involution,
                          canonical_unit, central_certificate,
                          enumerate_involutions, induced_involution,
                          solve_norm_equation)
from .morphisms import (ENUM_BOUND, AlgebraMap, central_units,
                        conjugation_search, enumerate_multiplicative,
                        fractionality_gate, is_fractional, transport,
                        unit_generators, unit_space_size)
from .posets import (automorphisms, component_action, conjugate_involutions,
                     decompose_involution, involutions)


@dataclass(frozen=True)
class EquivalenceWitness:
    """Replayable witness: with w = t^-1, conjugation by w intertwines the
    two involutions (after relabeling by alpha in the general case)."""

    kind: str
    t: IncidenceFunction
    c: IncidenceFunction
    alpha: object = None


@dataclass(frozen=True)
class ClassReport:
    flip: object
    field: object
    count: int
    representatives: tuple
    sizes: tuple
    method: str


class _Partition:
    """Orbit partition of the involutions inducing one flip, under
    u -> canonical(t u transpose(t)) over the whole unit group."""

    def __init__(self, involutions_list, orbit_of, conjugator, reps):
        self.involutions = involutions_list
        self.index_of = {iv.unit.key(): i for i, iv in enumerate(involutions_list)}
        self.orbit_of = orbit_of
        self.conjugator = conjugator
        self.reps = reps


_PARTITIONS = {}


def inner_partition(flip, fld, bound=ENUM_BOUND):
    """Exhaustive, theorem-free partition of the enumerated involutions into
    inner-equivalence classes: breadth-first orbits under a generating set
    of the unit group, with conjugating units recorded along the way."""
    cache_key = (flip, fld)
    got = _PARTITIONS.get(cache_key)
    if got is not None:
        return got
    poset = flip.poset
    invs = enumerate_involutions(flip, fld, bound)
    index_of = {iv.unit.key(): i for i, iv in enumerate(invs)}
    gen_pairs = [(g, transport(flip, g)) for g in unit_generators(poset, fld)]
    orbit_of = {}
    conjugator = {}
    reps = []
    one = delta(poset, fld)
    for iv in invs:
        start = iv.unit.key()
        if start in orbit_of:
            continue
        reps.append(start)
        orbit_of[start] = start
        conjugator[start] = one
        queue = deque([iv.unit])
        while queue:
            cur = queue.popleft()
            t_cur = conjugator[cur.key()]
            for g, g_moved in gen_pairs:
                nxt = canonical_unit(g * cur * g_moved)
                k = nxt.key()
                if k in orbit_of:
                    continue
                if k not in index_of:
                    raise RuntimeError("orbit stepped outside the enumeration")
                orbit_of[k] = start
                conjugator[k] = g * t_cur
                queue.append(nxt)
    part = _Partition(invs, orbit_of, conjugator, reps)
    _PARTITIONS[cache_key] = part
    return part


def _require_comparable(rho, eta):
    if rho.poset != eta.poset or rho.field != eta.field:
        raise ValueError("involutions live on different algebras")
    if rho.flip != eta.flip:
        raise LambdaMismatchError(
            "inner equivalence needs the same induced order involution")


def inner_equivalent(rho, eta, bound=ENUM_BOUND):
    """Oracle: exhaustive orbit decision, witness from the search forest,
    replay-checked on the whole indicator basis before returning."""
    _require_comparable(rho, eta)
    part = inner_partition(rho.flip, rho.field, bound)
    ku, kv = rho.unit.key(), eta.unit.key()
    if part.orbit_of[ku] != part.orbit_of[kv]:
        return False, None
    t = part.conjugator[ku] * part.conjugator[kv].inverse()
    moved = t * eta.unit * transport(rho.flip, t)
    c = rho.unit * moved.inverse()
    if not c.is_central:
        raise RuntimeError("conjugator lost centrality")
    witness = EquivalenceWitness("inner", t, c)
    _replay_inner(rho, eta, witness)
    return True, witness


def _replay_inner(rho, eta, witness):
    w = witness.t.inverse()
    psi = AlgebraMap.inner(w)
    if psi.compose(rho.as_map()) != eta.as_map().compose(psi):
        raise RuntimeError("witness failed to replay on the basis")


def inner_equivalent_scan(rho, eta, bound=20000):
    """Literal scan in canonical order for the first (t, c) with
    u = c t v transpose(t); independent of the orbit machinery."""
    _require_comparable(rho, eta)
    poset, fld = rho.poset, rho.field
    if not fld.finite or unit_space_size(poset, fld) > bound:
        raise BoundExceededError("scan space exceeds bound")
    flip = rho.flip
    u, v = rho.unit, eta.unit
    from .morphisms import units_mod_center
    for t in units_mod_center(poset, fld, bound):
        s = t * v * transport(flip, t)
        c_vals = {}
        ok = True
        for j, comp in enumerate(poset.components):
            m = comp[0]
            sm = s.entries[(m, m)]
            if sm.is_zero:
                ok = False
                break
            c_vals[j] = u.entries[(m, m)] / sm
        if not ok:
            continue
        scaled = {
            p: c_vals[poset.comp_of[p[0]]] * s.entries[p] for p in poset.pairs}
        if all(scaled[p] == u.entries[p] for p in poset.pairs):
            c = IncidenceFunction.diagonal(
                poset, fld,
                {x: c_vals[poset.comp_of[x]] for x in poset.elements})
            return True, EquivalenceWitness("inner", t, c)
    return False, None


def _checked_gate(poset, fld, bound):
    gate = fractionality_gate(poset, fld, bound)
    if not gate.holds:
        raise MultiplicativeGateError(gate.component, gate.witness)


def inner_equivalent_fast(rho, eta, bound=ENUM_BOUND):
    """Reduction path: with no kept component everything collapses to the
    plain transpose; otherwise decide on each kept component alone.
    Refuses when some component admits a non-fractional multiplicative
    element, since the reductions presuppose scalings are inner."""
    _require_comparable(rho, eta)
    _checked_gate(rho.poset, rho.field, bound)
    action = component_action(rho.poset, rho.flip)
    if not action.fixed:
        return True
    for j in action.fixed:
        ok, _ = inner_equivalent(rho.restrict([j]), eta.restrict([j]), bound)
        if not ok:
            return False
    return True


def collapse_conjugator(rho):
    """When the flip keeps no component: the explicit chain certificate ->
    balancing unit -> norm solution, returning v1 such that conjugation by
    v1^-1 carries rho onto the plain transpose; replay-checked."""
    flip = rho.flip
    w = balancing_unit(flip, rho.unit)
    u1 = w * rho.unit
    v1 = solve_norm_equation(flip, u1)
    winv = v1.inverse()
    psi = AlgebraMap.inner(winv)
    plain = base_involution(flip, rho.field)
    if psi.compose(rho.as_map()) != plain.as_map().compose(psi):
        raise RuntimeError("collapse chain failed to replay")
    return v1


def class_count_formula(poset, flip, fld):
    """Closed form: 2 per kept component without fixed elements, and the
    square-class count to the power (#fixed elements - 1) for the rest."""
    action = component_action(poset, flip)
    free = set(action.fixed_point_free)
    count = 2 ** len(free)
    sk = fld.square_class_count()
    for j in action.fixed:
        if j in free:
            continue
        exp = len(action.psets[j][2]) - 1
        if exp == 0:
            continue
        if sk != 2:
            raise InfiniteClassCountError(
                f"component {j} has {exp + 1} fixed elements over {fld}")
        count *= sk ** exp
    return count


def classify_involutions(flip, fld, bound=ENUM_BOUND):
    """Enumerated ground truth: partition all involutions inducing the flip
    into inner-equivalence classes; cross-checked against the product of the
    per-kept-component counts."""
    part = inner_partition(flip, fld, bound)
    rep_invs = tuple(part.involutions[part.index_of[r]] for r in part.reps)
    sizes = tuple(
        sum(1 for k in part.orbit_of.values() if k == r) for r in part.reps)
    count = len(part.reps)

    poset = flip.poset
    action = component_action(poset, flip)
    product_count = 1
    for j in action.fixed:
        union = poset.component_union([j])
        sub_part = inner_partition(flip.restrict(union), fld, bound)
        product_count *= len(sub_part.reps)
    if product_count != count:
        raise RuntimeError(
            f"componentwise product {product_count} != class count {count}")
    return ClassReport(flip, fld, count, rep_invs, sizes, "brute-force")


def general_equivalent(rho, eta, bound=ENUM_BOUND):
    """Equivalence under arbitrary algebra automorphisms: relabel one side
    by each poset automorphism and ask the inner oracle.  Gated like the
    fast path, since completeness of this search needs scalings inner."""
    if rho.poset != eta.poset or rho.field != eta.field:
        raise ValueError("involutions live on different algebras")
    poset, fld = rho.poset, rho.field
    _checked_gate(poset, fld, bound)

    result = None
    for alpha in automorphisms(poset):
        conjugated_flip = alpha.compose(eta.flip).compose(alpha.inverse())
        if conjugated_flip != rho.flip:
            continue
        moved = Involution(conjugated_flip, transport(alpha, eta.unit))
        ok, wit = inner_equivalent(rho, moved, bound)
        if ok:
            witness = EquivalenceWitness("general", wit.t, wit.c, alpha)
            _replay_general(rho, eta, witness)
            result = (True, witness)
            break
    if result is None:
        result = (False, None)

    # agreement with the restriction route, where it is defined
    action = component_action(poset, rho.flip)
    if (rho.flip == eta.flip and action.fixed
            and len(action.fixed) < len(poset.components)):
        reduced, _ = general_equivalent(
            rho.restrict(action.fixed), eta.restrict(action.fixed), bound)
        if reduced != result[0]:
            raise RuntimeError(
                "restriction to kept components disagrees with the search")
    return result


def _replay_general(rho, eta, witness):
    poset, fld = rho.poset, rho.field
    w = witness.t.inverse()
    phi = AlgebraMap.induced(witness.alpha.inverse(), fld).compose(
        AlgebraMap.inner(w))
    if phi.compose(rho.as_map()) != eta.as_map().compose(phi):
        raise RuntimeError("general witness failed to replay")


@dataclass
class CheckResult:
    name: str
    status: str  # pass / fail / refused / skipped
    details: str = ""


@dataclass
class BatteryReport:
    poset: object
    field: object
    checks: list = dc_field(default_factory=list)

    @property
    def passed(self):
        return all(c.status != "fail" for c in self.checks)

    def failures(self):
        return [c for c in self.checks if c.status == "fail"]


def run_battery(poset, fld, *, enum_bound=ENUM_BOUND, mult_bound=20000,
                scan_bound=3000, seed=0, rounds=20):
    """Execute every theorem of the classification as a concrete check on
    one poset; each check reports pass/fail, a gate refusal, or a skip when
    its search space exceeds the bound."""
    report = BatteryReport(poset, fld)
    rng = random.Random(seed)

    def run(name, fn):
        try:
            fn()
        except BoundExceededError as exc:
            report.checks.append(CheckResult(name, "skipped", str(exc)))
        except MultiplicativeGateError as exc:
            report.checks.append(CheckResult(name, "refused", str(exc)))
        except Exception as exc:  # noqa: BLE001 - counterexample payload
            report.checks.append(CheckResult(name, "fail", repr(exc)))
        else:
            report.checks.append(CheckResult(name, "pass"))

    flips = involutions(poset)
    gate = fractionality_gate(poset, fld, mult_bound)

    def check_decomposition():
        for lam in flips:
            dec = decompose_involution(poset, lam)
            for x in poset.elements:
                if lam(x) == x:
                    continue
                below = any(lam(y) == y for y in poset.down[x] if y != x)
                above = any(lam(y) == y for y in poset.up[x] if y != x)
                assert not (below and above), f"{x!r} trapped between fixed points"
            assert dec.fixed | dec.lower | dec.upper == set(poset.elements)

    run("decomposition-closure", check_decomposition)

    def check_component_structure():
        for lam in flips:
            action = component_action(poset, lam)
            for j, comp in enumerate(poset.components):
                image = {lam(x) for x in comp}
                assert image == set(poset.components[action.perm[j]])
            k = len(poset.components)
            for mask in range(1, 1 << k):
                indices = [j for j in range(k) if mask >> j & 1]
                union = poset.component_union(indices)
                if {lam(x) for x in union} == union:
                    rest = poset.component_union(
                        [j for j in range(k) if j not in indices])
                    assert {lam(x) for x in rest} == rest

    run("component-structure", check_component_structure)

    def check_center():
        cb = center_basis(poset, fld)
        commutant = center_by_commutant(poset, fld)
        assert len(cb) == len(commutant) == len(poset.components)
        assert all(v.is_central for v in commutant)
        for v in cb:
            for e in basis(poset, fld):
                assert v * e == e * v

    run("center-equals-commutant", check_center)

    def check_algebra_axioms():
        d = delta(poset, fld)
        for _ in range(rounds):
            f = random_function(poset, fld, rng)
            g = random_function(poset, fld, rng)
            h = random_function(poset, fld, rng)
            assert (f * g) * h == f * (g * h)
            assert d * f == f and f * d == f
            u = random_unit(poset, fld, rng)
            assert u * u.inverse() == d and u.inverse() * u == d

    run("algebra-axioms", check_algebra_axioms)

    def check_restrictions():
        k = len(poset.components)
        if k < 2:
            return
        proper = [
            [j for j in range(k) if mask >> j & 1]
            for mask in range(1, (1 << k) - 1)
        ]
        for _ in range(max(3, rounds // 4)):
            f = random_function(poset, fld, rng)
            g = random_function(poset, fld, rng)
            u = random_unit(poset, fld, rng)
            for indices in proper:
                assert (f + g).restrict(indices) == \
                    f.restrict(indices) + g.restrict(indices)
                assert (f * g).restrict(indices) == \
                    f.restrict(indices) * g.restrict(indices)
                assert (u.inverse()).restrict(indices) == \
                    u.restrict(indices).inverse()
                psi_full = (u * f * u.inverse()).restrict(indices)
                ur = u.restrict(indices)
                assert psi_full == ur * f.restrict(indices) * ur.inverse()
            for lam in flips:
                for indices in proper:
                    union = poset.component_union(indices)
                    if {lam(x) for x in union} != union:
                        continue
                    rho = base_involution(lam, fld)
                    lhs = rho.apply(f).restrict(indices)
                    rhs = rho.restrict(indices).apply(f.restrict(indices))
                    assert lhs == rhs

    run("restriction-identities", check_restrictions)

    def check_scaling_inner():
        if not fld.finite:
            raise BoundExceededError("scaling sweep needs a finite field")
        for j in range(len(poset.components)):
            sub = poset.components_subposet([j])
            if unit_space_size(sub, fld) > scan_bound:
                raise BoundExceededError("conjugator scan exceeds bound")
            for sigma in enumerate_multiplicative(sub, fld, mult_bound):
                frac, _ = is_fractional(sigma)
                found, _ = conjugation_search(sigma, scan_bound)
                assert frac == found, f"disagreement on {sigma!r}"

    run("scaling-inner-iff-fractional", check_scaling_inner)

    def _all_descriptors():
        for lam in flips:
            yield lam, enumerate_involutions(lam, fld, enum_bound)

    def check_certificates():
        for lam, descriptors in _all_descriptors():
            action = component_action(poset, lam)
            for iv in descriptors:
                cert = iv.certificate()
                assert cert.v.is_central
                for j, kj in enumerate(cert.constants):
                    assert (kj * cert.constants[action.perm[j]]).is_one

    run("central-unit-certificate", check_certificates)

    def check_order_two():
        es = basis(poset, fld)
        for lam, descriptors in _all_descriptors():
            for iv in descriptors[:12]:
                for e in es:
                    assert iv.apply(iv.apply(e)) == e
                f = random_function(poset, fld, rng)
                g = random_function(poset, fld, rng)
                assert iv.apply(f * g) == iv.apply(g) * iv.apply(f)
                assert induced_involution(iv) == lam

    run("involution-order-two", check_order_two)

    def check_collapse():
        for lam, descriptors in _all_descriptors():
            if component_action(poset, lam).fixed:
                continue
            for iv in descriptors:
                collapse_conjugator(iv)

    run("swap-collapse", check_collapse)

    def check_fast_vs_oracle():
        _checked_gate(poset, fld, mult_bound)
        for lam, descriptors in _all_descriptors():
            pairs = [(a, b) for i, a in enumerate(descriptors)
                     for b in descriptors[i:]]
            if len(pairs) > 400:
                pairs = pairs[:200] + rng.sample(pairs[200:], 200)
            for a, b in pairs:
                fast = inner_equivalent_fast(a, b, enum_bound)
                oracle, _ = inner_equivalent(a, b, enum_bound)
                assert fast == oracle

    run("fixed-component-reduction", check_fast_vs_oracle)

    def check_counts():
        _checked_gate(poset, fld, mult_bound)
        for lam in flips:
            formula = class_count_formula(poset, lam, fld)
            brute = classify_involutions(lam, fld, enum_bound)
            assert formula == brute.count, \
                f"formula {formula} != enumerated {brute.count} for {lam!r}"

    run("class-count-formula", check_counts)

    def check_product():
        for lam in flips:
            classify_involutions(lam, fld, enum_bound)  # internal assert

    run("componentwise-class-product", check_product)

    def check_stability():
        for lam in flips:
            action = component_action(poset, lam)
            if not action.fixed:
                continue
            union = poset.component_union(action.fixed)
            for alpha in automorphisms(poset):
                if alpha.compose(lam) == lam.compose(alpha):
                    assert {alpha(x) for x in union} == union

    run("commuting-automorphism-stability", check_stability)

    def check_general():
        _checked_gate(poset, fld, mult_bound)
        sample = []
        for lam, descriptors in _all_descriptors():
            sample.extend(descriptors[:3])
        sample = sample[:8]
        for a in sample:
            for b in sample:
                ok, wit = general_equivalent(a, b, enum_bound)
                if ok:
                    assert conjugate_involutions(
                        induced_involution(a), induced_involution(b))[0]

    run("general-vs-inner-reduction", check_general)

    def check_scan_agreement():
        if not fld.finite or unit_space_size(poset, fld) > scan_bound:
            raise BoundExceededError("scan space exceeds bound")
        for lam, descriptors in _all_descriptors():
            for a in descriptors[:6]:
                for b in descriptors[:6]:
                    scan, _ = inner_equivalent_scan(a, b, scan_bound)
                    orbit, _ = inner_equivalent(a, b, enum_bound)
                    assert scan == orbit

    run("oracle-scan-agreement", check_scan_agreement)

    return report
