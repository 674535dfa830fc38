"""Algebra involutions of the form (conjugate by a unit) . (transpose along
an order involution): validation, canonical forms, enumeration, restriction,
and the constructive pieces used when no component is kept in place."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .algebra import IncidenceFunction, delta
from .errors import BoundExceededError, NotInvolutionError
from .morphisms import ENUM_BOUND, AlgebraMap, transport, unit_space_size
from .posets import ANTI, PosetMap, component_action


def canonical_unit(u):
    """Scale by a central unit so the diagonal entry at each component's
    least element is 1; conjugation by u only sees u modulo the center."""
    poset = u.poset
    factors = {}
    for j, comp in enumerate(poset.components):
        m = comp[0]
        factors[j] = u.entries[(m, m)].inverse()
    entries = {
        pair: factors[poset.comp_of[pair[0]]] * v
        for pair, v in u.entries.items()
    }
    return IncidenceFunction(poset, u.field, entries)


@dataclass(frozen=True)
class CentralUnitCertificate:
    """Central unit v with transpose(u) = v u, and its per-component
    constants; paired components carry mutually inverse constants."""

    v: IncidenceFunction
    constants: tuple


def central_certificate(flip, unit):
    """The central unit witnessing that (conjugate by unit) . transpose is
    an involution, with all its invariants checked."""
    v = transport(flip, unit) * unit.inverse()
    if not v.is_central:
        raise NotInvolutionError(
            f"transpose(u) u^-1 is not central: {v!r}")
    poset = unit.poset
    constants = tuple(
        v.entries[(comp[0], comp[0])] for comp in poset.components)
    action = component_action(poset, flip)
    for j, k in enumerate(constants):
        if not (k * constants[action.perm[j]]).is_one:
            raise RuntimeError("certificate constants fail the pairing rule")
    return CentralUnitCertificate(v, constants)


class Involution:
    """Descriptor (flip, unit): the anti-automorphism
    f -> unit . transpose_flip(f) . unit^-1, kept with unit canonical."""

    __slots__ = ("flip", "unit", "_uinv", "_hash")

    def __init__(self, flip, unit, _canonical=False):
        if not flip.is_involution():
            raise NotInvolutionError(f"{flip!r} is not an order involution")
        if unit.poset != flip.poset:
            raise ValueError("unit and flip live on different posets")
        if not unit.is_unit:
            raise ValueError("conjugating element is not a unit")
        if not _canonical:
            unit = canonical_unit(unit)
            v = transport(flip, unit) * unit.inverse()
            if not v.is_central:
                raise NotInvolutionError(
                    f"not an involution: transpose(u) u^-1 = {v!r} is not central")
        self.flip = flip
        self.unit = unit
        self._uinv = unit.inverse()
        self._hash = hash((flip, unit))

    @property
    def poset(self):
        return self.flip.poset

    @property
    def field(self):
        return self.unit.field

    def apply(self, f):
        return self.unit * transport(self.flip, f) * self._uinv

    def as_map(self):
        return AlgebraMap(self.poset, self.field, u=self.unit, phi=self.flip)

    def certificate(self):
        return central_certificate(self.flip, self.unit)

    def restrict(self, indices):
        """Restriction to a flip-stable union of components."""
        indices = sorted(set(indices))
        union = self.poset.component_union(indices)
        if frozenset(self.flip(x) for x in union) != union:
            raise ValueError(f"components {indices} are not flip-stable")
        return Involution(
            self.flip.restrict(union), self.unit.restrict(indices))

    def key(self):
        return (self.flip._items, self.unit.key())

    def __eq__(self, other):
        return (
            isinstance(other, Involution)
            and other.flip == self.flip
            and other.unit == self.unit
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Involution(flip={self.flip!r}, unit={self.unit!r})"


def make_involution(flip, unit):
    """Validate and canonicalize a (flip, unit) descriptor."""
    return Involution(flip, unit)


def base_involution(flip, field):
    """The plain transpose along flip (unit = unity)."""
    return Involution(flip, delta(flip.poset, field))


def enumerate_involutions(flip, field, bound=ENUM_BOUND):
    """All involutions inducing flip, one canonical unit per distinct inner
    conjugation, in deterministic order.

    Built directly: on swapped component pairs the first block is free and
    determines the second; on a kept component the unit solves
    transpose(u) = k u entrywise with k^2 = 1."""
    poset = flip.poset
    if not flip.is_involution():
        raise NotInvolutionError(f"{flip!r} is not an order involution")
    size = unit_space_size(poset, field)
    if size > bound:
        raise BoundExceededError(
            f"{size} units modulo center exceed bound {bound}")
    action = component_action(poset, flip)
    blocks = []
    for i in action.orbit_reps():
        blocks.append(_paired_block(poset, flip, field, i, action.perm[i]))
    for j in action.fixed:
        blocks.append(_fixed_block(poset, flip, field, j))
    out = []
    for combo in product(*blocks):
        entries = {}
        for fragment in combo:
            entries.update(fragment)
        unit = IncidenceFunction(poset, field, entries)
        out.append(Involution(flip, unit))
    return out


def _component_pairs(poset, j):
    members = set(poset.components[j])
    return [p for p in poset.pairs if p[0] in members]


def _paired_block(poset, flip, field, i, j):
    """Unit fragments on a swapped component pair: free canonical block on
    the first component, transported and renormalized on the second."""
    pairs_i = _component_pairs(poset, i)
    pairs_j = _component_pairs(poset, j)
    m_i = poset.components[i][0]
    m_j = poset.components[j][0]
    pools = []
    for x, y in pairs_i:
        if x == y:
            pools.append([field.one] if x == m_i else field.units())
        else:
            pools.append(field.elements())
    fragments = []
    for combo in product(*pools):
        entries = dict(zip(pairs_i, combo))
        mirrored = {(x, y): entries[(flip(y), flip(x))] for x, y in pairs_j}
        scale = mirrored[(m_j, m_j)].inverse()
        for pair, v in mirrored.items():
            entries[pair] = scale * v
        fragments.append(entries)
    return fragments


def _fixed_block(poset, flip, field, j):
    """Unit fragments on a kept component: entries solve
    u(flip(y), flip(x)) = k u(x, y) with k = 1, or k = -1 when the
    component has no flip-fixed element."""
    comp = poset.components[j]
    m = comp[0]
    pairs_j = _component_pairs(poset, j)
    index = {p: i for i, p in enumerate(pairs_j)}
    partner = {p: (flip(p[1]), flip(p[0])) for p in pairs_j}
    has_fixed_point = any(flip(x) == x for x in comp)
    ks = [field.one] if has_fixed_point else [field.one, field.scalar(-1)]
    reps = [p for p in pairs_j if index[p] <= index[partner[p]]]
    fragments = []
    for k in ks:
        pools = []
        for x, y in reps:
            if x == y:
                if x == m or flip(x) == m:
                    pools.append([None])  # forced by canonicality
                else:
                    pools.append(field.units())
            elif partner[(x, y)] == (x, y):
                pools.append(field.elements() if k.is_one else [field.zero])
            else:
                pools.append(field.elements())
        for combo in product(*pools):
            entries = {(m, m): field.one, (flip(m), flip(m)): k}
            for pair, v in zip(reps, combo):
                if v is None:
                    continue
                entries[pair] = v
                entries[partner[pair]] = k * v
            fragments.append(entries)
    return fragments


def paired_split(action):
    """Deterministic two-sided split of the component orbits: the smaller
    index of each swapped pair goes first.  Only valid with nothing kept."""
    if action.fixed:
        raise ValueError("split needs every component to be moved")
    first = action.orbit_reps()
    return first, tuple(action.perm[i] for i in first)


def solve_norm_equation(flip, u1):
    """Find v1 with v1 . transpose(v1) = u1, assuming no component is kept
    and u1 is transpose-fixed: copy u1 on the first side of the component
    split, put the unity on the other, then verify."""
    poset, field = u1.poset, u1.field
    action = component_action(poset, flip)
    if action.fixed:
        raise ValueError("norm equation needs every component to be moved")
    if transport(flip, u1) != u1:
        raise ValueError("right-hand side is not transpose-fixed")
    first = set(paired_split(action)[0])
    entries = {}
    for pair in poset.pairs:
        if poset.comp_of[pair[0]] in first:
            entries[pair] = u1.entries[pair]
        else:
            entries[pair] = field.one if pair[0] == pair[1] else field.zero
    v1 = IncidenceFunction(poset, field, entries)
    if v1 * transport(flip, v1) != u1:
        raise RuntimeError("norm construction failed its verification")
    return v1


def balancing_unit(flip, unit, split=None):
    """The central diagonal built from the certificate constants on the
    first side of the split and 1 on the other; multiplying the unit by it
    yields a transpose-fixed unit defining the same conjugation."""
    poset, field = unit.poset, unit.field
    cert = central_certificate(flip, unit)
    action = component_action(poset, flip)
    if action.fixed:
        raise ValueError("balancing needs every component to be moved")
    if split is None:
        split = paired_split(action)
    j1, j2 = set(split[0]), set(split[1])
    if j1 | j2 != set(range(len(poset.components))) or j1 & j2:
        raise ValueError("split is not a partition of the components")
    if {action.perm[i] for i in j1} != j2:
        raise ValueError("split sides are not exchanged by the flip")
    values = {}
    for j, comp in enumerate(poset.components):
        for x in comp:
            values[x] = cert.constants[j] if j in j1 else field.one
    w = IncidenceFunction.diagonal(poset, field, values)
    if transport(flip, w) * cert.v != w:
        raise RuntimeError("balancing unit failed its fixed-point identity")
    fixed_unit = w * unit
    if transport(flip, fixed_unit) != fixed_unit:
        raise RuntimeError("balanced unit is not transpose-fixed")
    return w


def induced_involution(rho):
    """Read off the order involution from the action on the diagonal
    idempotents: the image of each e_x has a single nonzero diagonal."""
    poset, field = rho.poset, rho.field
    mapping = {}
    for x in poset.elements:
        image = rho.apply(IncidenceFunction.basis_element(poset, field, x, x))
        targets = [y for y in poset.elements
                   if not image.entries[(y, y)].is_zero]
        if len(targets) != 1:
            raise RuntimeError(f"idempotent image at {x!r} is not localized")
        mapping[x] = targets[0]
    return PosetMap(poset, mapping, ANTI)
