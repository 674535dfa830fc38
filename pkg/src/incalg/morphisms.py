"""Maps on the incidence algebra: inner conjugations, induced relabelings
and transposes, entrywise multiplicative scalings, fractional elements, and
the canonical composite of all three."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .algebra import IncidenceFunction, delta
from .errors import BoundExceededError, NotMultiplicativeError
from .fields import PrimeField, Rationals
from .posets import ANTI, AUTO, PosetMap

_RAT = Rationals()

ENUM_BOUND = 10 ** 6


def transport(phi, f):
    """Image of an incidence function under the algebra map induced by a
    poset automorphism (relabel) or anti-automorphism (relabel + transpose)."""
    if phi.poset != f.poset:
        raise ValueError("map and function live on different posets")
    inv = phi.inverse()
    if phi.kind == AUTO:
        entries = {(x, y): f.entries[(inv(x), inv(y))] for x, y in f.poset.pairs}
    else:
        entries = {(x, y): f.entries[(inv(y), inv(x))] for x, y in f.poset.pairs}
    return IncidenceFunction(f.poset, f.field, entries)


class MultiplicativeElement:
    """Nonvanishing function on comparable pairs with the two-step product
    rule s(x,y)s(y,z) = s(x,z); acts on the algebra by entrywise scaling."""

    __slots__ = ("poset", "field", "entries", "_key")

    def __init__(self, poset, field, entries):
        for pair in poset.pairs:
            v = entries.get(pair)
            if v is None:
                raise NotMultiplicativeError(f"missing value at {pair!r}")
            if v.is_zero:
                raise NotMultiplicativeError(f"zero value at {pair!r}")
        for x, y in poset.diag_pairs:
            if not entries[(x, y)].is_one:
                raise NotMultiplicativeError(
                    f"diagonal value at {x!r} must be 1")
        for x, y in poset.strict_pairs:
            for z in poset.intervals[(x, y)]:
                if z != x and z != y:
                    if entries[(x, z)] * entries[(z, y)] != entries[(x, y)]:
                        raise NotMultiplicativeError(
                            f"product rule fails on {(x, z, y)!r}")
        self.poset = poset
        self.field = field
        self.entries = dict(entries)
        self._key = tuple(self.entries[p].value for p in poset.pairs)

    @classmethod
    def from_entries(cls, poset, field, mapping):
        """Strict pairs must all be assigned; diagonal defaults to 1."""
        entries = {p: field.one for p in poset.diag_pairs}
        for pair, value in mapping.items():
            if pair not in poset.le:
                raise ValueError(f"pair {pair!r} is not in the order relation")
            entries[pair] = field.scalar(value)
        return cls(poset, field, entries)

    @classmethod
    def ones(cls, poset, field):
        return cls(poset, field, {p: field.one for p in poset.pairs})

    def value(self, x, y):
        return self.entries[(x, y)]

    def scale_function(self, f):
        """Entrywise action on an incidence function."""
        return IncidenceFunction(
            self.poset, f.field,
            {p: self.entries[p] * f.entries[p] for p in self.poset.pairs})

    def __mul__(self, other):
        if other.poset != self.poset or other.field != self.field:
            raise ValueError("mismatched multiplicative elements")
        return MultiplicativeElement(
            self.poset, self.field,
            {p: self.entries[p] * other.entries[p] for p in self.poset.pairs})

    def restrict(self, indices):
        sub = self.poset.components_subposet(sorted(set(indices)))
        return MultiplicativeElement(
            sub, self.field, {p: self.entries[p] for p in sub.pairs})

    def __eq__(self, other):
        return (
            isinstance(other, MultiplicativeElement)
            and other.poset == self.poset
            and other.field == self.field
            and other._key == self._key
        )

    def __hash__(self):
        return hash((self.poset, self.field, self._key))

    def __repr__(self):
        shown = " ".join(f"({x},{y})={self.entries[(x, y)]}"
                         for x, y in self.poset.strict_pairs)
        return f"MultiplicativeElement[{shown or '1'}]"


def transport_mult(phi, sigma):
    inv = phi.inverse()
    if phi.kind == AUTO:
        entries = {(x, y): sigma.entries[(inv(x), inv(y))]
                   for x, y in sigma.poset.pairs}
    else:
        entries = {(x, y): sigma.entries[(inv(y), inv(x))]
                   for x, y in sigma.poset.pairs}
    return MultiplicativeElement(sigma.poset, sigma.field, entries)


def fractional_element(poset, field, h):
    """The multiplicative element (x, y) -> h(x)/h(y)."""
    values = {}
    for x in poset.elements:
        if x not in h:
            raise ValueError(f"no value for element {x!r}")
        v = field.scalar(h[x])
        if v.is_zero:
            raise ValueError(f"zero value at element {x!r}")
        values[x] = v
    entries = {(x, y): values[x] / values[y] for x, y in poset.pairs}
    return MultiplicativeElement(poset, field, entries)


def _cover_adjacency(poset):
    adj = {x: [] for x in poset.elements}
    for u, v in sorted(poset.covers):
        adj[u].append(v)
        adj[v].append(u)
    return adj


def is_fractional(sigma):
    """Decide whether sigma has the h(x)/h(y) form.

    Fixes h = 1 at each component root, propagates along a spanning tree of
    the cover graph, then verifies every comparable pair.  Returns the
    witness h on success, or the vertex cycle that breaks on failure."""
    poset, field = sigma.poset, sigma.field
    adj = _cover_adjacency(poset)
    h = {}
    parent = {}
    for comp in poset.components:
        root = comp[0]
        h[root] = field.one
        parent[root] = None
        queue = deque([root])
        while queue:
            t = queue.popleft()
            for w in adj[t]:
                if w in h:
                    continue
                if poset.leq(t, w):
                    h[w] = h[t] / sigma.value(t, w)
                else:
                    h[w] = sigma.value(w, t) * h[t]
                parent[w] = t
                queue.append(w)
    for x, y in poset.strict_pairs:
        if sigma.value(x, y) != h[x] / h[y]:
            return False, _witness_cycle(parent, x, y)
    return True, h


def _witness_cycle(parent, x, y):
    def path_to_root(v):
        out = [v]
        while parent[out[-1]] is not None:
            out.append(parent[out[-1]])
        return out

    px, py = path_to_root(x), path_to_root(y)
    while len(px) > 1 and len(py) > 1 and px[-2] == py[-2]:
        px.pop()
        py.pop()
    return tuple(px + py[-2::-1])


def mult_is_inner(sigma):
    """Entrywise scaling by sigma is an inner conjugation exactly when sigma
    is fractional; the witness is the diagonal unit built from h."""
    ok, wit = is_fractional(sigma)
    if not ok:
        return False, None
    u = IncidenceFunction.diagonal(sigma.poset, sigma.field, wit)
    if AlgebraMap.inner(u).table() != AlgebraMap.mult(sigma).table():
        raise RuntimeError("fractional witness failed to conjugate")
    return True, u


def conjugation_search(sigma, bound=ENUM_BOUND):
    """Independent route: scan units modulo center for a conjugation that
    matches entrywise scaling by sigma on the whole indicator basis."""
    poset, field = sigma.poset, sigma.field
    target = AlgebraMap.mult(sigma).table()
    for u in units_mod_center(poset, field, bound):
        if _psi_table(poset, u) == target:
            return True, u
    return False, None


def enumerate_multiplicative(poset, field, bound=ENUM_BOUND):
    """All multiplicative elements over a finite field, in deterministic
    order; parameterized by cover values filtered by chain consistency."""
    if not field.finite:
        raise BoundExceededError("multiplicative enumeration needs a finite field")
    covers = sorted(poset.covers)
    if field.unit_count ** len(covers) > bound:
        raise BoundExceededError(
            f"{field.unit_count ** len(covers)} cover assignments exceed {bound}")
    noncovers = sorted(
        (p for p in poset.strict_pairs if p not in poset.covers),
        key=lambda p: len(poset.intervals[p]))
    out = []
    for combo in product(field.units(), repeat=len(covers)):
        entries = {p: field.one for p in poset.diag_pairs}
        entries.update(zip(covers, combo))
        ok = True
        for x, y in noncovers:
            mid = next(z for z in poset.intervals[(x, y)] if z != x and z != y)
            entries[(x, y)] = entries[(x, mid)] * entries[(mid, y)]
        for x, y in noncovers:
            for z in poset.intervals[(x, y)]:
                if z != x and z != y:
                    if entries[(x, z)] * entries[(z, y)] != entries[(x, y)]:
                        ok = False
                        break
            if not ok:
                break
        if ok:
            out.append(MultiplicativeElement(poset, field, entries))
    return out


@dataclass(frozen=True)
class GateReport:
    """Whether every multiplicative element is fractional, per component."""

    holds: bool
    component: object = None
    witness: object = None


def fractionality_gate(poset, field, bound=ENUM_BOUND):
    """Check per connected component that every multiplicative element is
    fractional (equivalently, that every entrywise-scaling automorphism is
    inner).  Tree-shaped cover graphs and components with an all-comparable
    element pass structurally; otherwise the check is exhaustive."""
    for j in range(len(poset.components)):
        sub = poset.components_subposet([j])
        if len(sub.covers) <= sub.size - 1:
            continue  # spanning tree has no extra edges, no cycle conditions
        if sub.all_comparable():
            continue
        if field.finite:
            for sigma in enumerate_multiplicative(sub, field, bound):
                ok, _ = is_fractional(sigma)
                if not ok:
                    return GateReport(False, j, sigma)
        else:
            ok, witness = _rational_component_gate(sub, bound)
            if not ok:
                return GateReport(False, j, witness)
    return GateReport(True, None, None)


def _rational_component_gate(sub, bound):
    """Over the rationals, split by the structure of Q* = {±1} x free part:
    sign patterns behave like the two-element group (checked through F3),
    free exponents reduce to exact linear algebra over the cover lattice."""
    f3 = PrimeField(3)
    for sigma3 in enumerate_multiplicative(sub, f3, bound):
        ok, _ = is_fractional(sigma3)
        if not ok:
            lift = {p: Fraction(1) if sigma3.entries[p].value == 1 else Fraction(-1)
                    for p in sub.pairs}
            rat = MultiplicativeElement(
                sub, _RAT, {p: _RAT.scalar(v) for p, v in lift.items()})
            return False, rat
    covers = sorted(sub.covers)
    relations = _chain_relations(sub, covers)
    cycles = _fundamental_cycles(sub, covers)
    kernel = _fraction_nullspace(relations, len(covers))
    for vec in kernel:
        for cyc in cycles:
            if sum(c * v for c, v in zip(cyc, vec)) != 0:
                return False, _free_witness(sub, covers, vec)
    return True, None


def _chain_relations(sub, covers):
    """For every comparable pair, all maximal chains must carry the same
    cover multiset; rows are differences against the first chain."""
    idx = {c: i for i, c in enumerate(covers)}
    rows = []
    for x, y in sub.strict_pairs:
        chains = _maximal_chains(sub, x, y)
        base = _chain_vector(chains[0], idx)
        for other in chains[1:]:
            vec = _chain_vector(other, idx)
            rows.append([a - b for a, b in zip(vec, base)])
    return rows


def _maximal_chains(sub, x, y):
    out = []
    stack = [(x, [x])]
    while stack:
        cur, path = stack.pop()
        if cur == y:
            out.append(path)
            continue
        for z in sub.intervals[(cur, y)]:
            if (cur, z) in sub.covers:
                stack.append((z, path + [z]))
    return out


def _chain_vector(chain, idx):
    vec = [0] * len(idx)
    for a, b in zip(chain, chain[1:]):
        vec[idx[(a, b)]] += 1
    return vec


def _fundamental_cycles(sub, covers):
    idx = {c: i for i, c in enumerate(covers)}
    adj = _cover_adjacency(sub)
    parent = {}
    tree = set()
    root = sub.elements[0]
    parent[root] = None
    queue = deque([root])
    while queue:
        t = queue.popleft()
        for w in adj[t]:
            if w in parent:
                continue
            parent[w] = t
            tree.add((t, w) if (t, w) in idx else (w, t))
            queue.append(w)
    cycles = []
    for edge in covers:
        if edge in tree:
            continue
        u, v = edge
        vec = [0] * len(covers)
        vec[idx[edge]] += 1  # traversed downward u -> v contributes +1
        # close with the tree path from v back to u
        pu, pv = _root_path(parent, u), _root_path(parent, v)
        while len(pu) > 1 and len(pv) > 1 and pu[-2] == pv[-2]:
            pu.pop()
            pv.pop()
        walk = pv + pu[-2::-1] if pu[-1] == pv[-1] else pv + pu[::-1]
        for a, b in zip(walk, walk[1:]):
            if (a, b) in idx:
                vec[idx[(a, b)]] += 1
            else:
                vec[idx[(b, a)]] -= 1
        cycles.append(vec)
    return cycles


def _root_path(parent, v):
    out = [v]
    while parent[out[-1]] is not None:
        out.append(parent[out[-1]])
    return out


def _fraction_nullspace(rows, width):
    matrix = [[Fraction(v) for v in row] for row in rows]
    pivots = []
    r = 0
    for c in range(width):
        pivot = next((i for i in range(r, len(matrix)) if matrix[i][c] != 0), None)
        if pivot is None:
            continue
        matrix[r], matrix[pivot] = matrix[pivot], matrix[r]
        inv = 1 / matrix[r][c]
        matrix[r] = [v * inv for v in matrix[r]]
        for i in range(len(matrix)):
            if i != r and matrix[i][c] != 0:
                f = matrix[i][c]
                matrix[i] = [a - f * b for a, b in zip(matrix[i], matrix[r])]
        pivots.append(c)
        r += 1
        if r == len(matrix):
            break
    free = [c for c in range(width) if c not in pivots]
    out = []
    for fc in free:
        vec = [Fraction(0)] * width
        vec[fc] = Fraction(1)
        for ri, pc in enumerate(pivots):
            vec[pc] = -matrix[ri][fc]
        out.append(vec)
    return out


def _free_witness(sub, covers, vec):
    scale = math.lcm(*(v.denominator for v in vec)) if vec else 1
    exps = dict(zip(covers, (int(v * scale) for v in vec)))
    entries = {p: _RAT.one for p in sub.diag_pairs}
    for pair in sorted(sub.strict_pairs, key=lambda p: len(sub.intervals[p])):
        if pair in exps:
            entries[pair] = _RAT.scalar(Fraction(2) ** exps[pair])
        else:
            x, y = pair
            mid = next(z for z in sub.intervals[pair] if z != x and z != y)
            entries[pair] = entries[(x, mid)] * entries[(mid, y)]
    return MultiplicativeElement(sub, _RAT, entries)


def unit_space_size(poset, field):
    """Number of units modulo central units."""
    if not field.finite:
        return math.inf
    q = field.p
    free_diag = poset.size - len(poset.components)
    return (q - 1) ** free_diag * q ** len(poset.strict_pairs)


def units_mod_center(poset, field, bound=ENUM_BOUND):
    """Canonical unit representatives: the diagonal entry at each component's
    least element is 1.  Deterministic odometer order, diagonal first."""
    size = unit_space_size(poset, field)
    if size > bound:
        raise BoundExceededError(f"{size} unit candidates exceed bound {bound}")
    least = set(poset.component_least)
    pools = []
    for x, _ in poset.diag_pairs:
        pools.append([field.one] if x in least else field.units())
    for _ in poset.strict_pairs:
        pools.append(field.elements())
    for combo in product(*pools):
        yield IncidenceFunction(poset, field, dict(zip(poset.pairs, combo)))


def central_units(poset, field, bound=ENUM_BOUND):
    """All central units: one nonzero constant per connected component."""
    if not field.finite:
        raise BoundExceededError("central units over the rationals are infinite")
    k = len(poset.components)
    if field.unit_count ** k > bound:
        raise BoundExceededError("central unit enumeration exceeds bound")
    for combo in product(field.units(), repeat=k):
        values = {}
        for j, comp in enumerate(poset.components):
            for x in comp:
                values[x] = combo[j]
        yield IncidenceFunction.diagonal(poset, field, values)


def unit_generators(poset, field):
    """A generating set of the unit group: one primitive-root diagonal per
    element, one elementary unipotent per cover pair."""
    if not field.finite:
        raise BoundExceededError("unit group over the rationals is not generated")
    gens = []
    root = field.scalar(field.primitive_root())
    for x in poset.elements:
        values = {y: root if y == x else field.one for y in poset.elements}
        gens.append(IncidenceFunction.diagonal(poset, field, values))
    d = delta(poset, field)
    for x, y in sorted(poset.covers):
        gens.append(IncidenceFunction.from_entries(
            poset, field,
            {**{(z, z): field.one for z in poset.elements}, (x, y): field.one}))
    return gens


def inner_equal(u, v):
    """Conjugation by u and by v agree exactly when u v^(-1) is central."""
    if not u.is_unit or not v.is_unit:
        raise ValueError("inner comparison needs units")
    return (u * v.inverse()).is_central


def _psi_table(poset, u):
    """Basis table of conjugation by u, computed directly."""
    uinv = u.inverse()
    ue, ie = u.entries, uinv.entries
    le = poset.le
    zero = u.field.zero.value
    rows = []
    for a, b in poset.pairs:
        row = []
        for x, y in poset.pairs:
            if (x, a) in le and (b, y) in le:
                row.append((ue[(x, a)] * ie[(b, y)]).value)
            else:
                row.append(zero)
        rows.append(tuple(row))
    return tuple(rows)


class AlgebraMap:
    """Composite map psi_u . m_sigma . (induced phi), evaluated right to
    left; any factor may be absent.  Equality is equality on the basis."""

    __slots__ = ("poset", "field", "u", "sigma", "phi", "_uinv", "_table")

    def __init__(self, poset, field, u=None, sigma=None, phi=None):
        if u is not None:
            if u.poset != poset or u.field != field:
                raise ValueError("conjugating unit has the wrong carrier")
            if not u.is_unit:
                raise ValueError("conjugating element is not a unit")
        if sigma is not None and (sigma.poset != poset or sigma.field != field):
            raise ValueError("scaling element has the wrong carrier")
        if phi is not None and phi.poset != poset:
            raise ValueError("induced map has the wrong poset")
        self.poset = poset
        self.field = field
        self.u = u
        self.sigma = sigma
        self.phi = phi
        self._uinv = u.inverse() if u is not None else None
        self._table = None

    @property
    def anti(self):
        return self.phi is not None and self.phi.kind == ANTI

    @classmethod
    def identity(cls, poset, field):
        return cls(poset, field)

    @classmethod
    def inner(cls, u):
        return cls(u.poset, u.field, u=u)

    @classmethod
    def mult(cls, sigma):
        return cls(sigma.poset, sigma.field, sigma=sigma)

    @classmethod
    def induced(cls, phi, field):
        return cls(phi.poset, field, phi=phi)

    def apply(self, f):
        if f.poset != self.poset or f.field != self.field:
            raise ValueError("function has the wrong carrier")
        g = f
        if self.phi is not None:
            g = transport(self.phi, g)
        if self.sigma is not None:
            g = self.sigma.scale_function(g)
        if self.u is not None:
            g = self.u * g * self._uinv
        return g

    def table(self):
        if self._table is None:
            rows = []
            for x, y in self.poset.pairs:
                e = IncidenceFunction.basis_element(self.poset, self.field, x, y)
                rows.append(self.apply(e).key())
            self._table = tuple(rows)
        return self._table

    def compose(self, other):
        """self after other, rewritten into the canonical composite."""
        if other.poset != self.poset or other.field != self.field:
            raise ValueError("composing maps on different carriers")
        w = other.u
        if w is not None and self.phi is not None:
            w = transport(self.phi, w)
            if self.phi.kind == ANTI:
                w = w.inverse()
        if w is not None and self.sigma is not None:
            w = self.sigma.scale_function(w)
        tau = other.sigma
        if tau is not None and self.phi is not None:
            tau = transport_mult(self.phi, tau)

        if self.u is None:
            u = w
        elif w is None:
            u = self.u
        else:
            u = self.u * w

        if self.sigma is None:
            sigma = tau
        elif tau is None:
            sigma = self.sigma
        else:
            sigma = self.sigma * tau

        if self.phi is None:
            phi = other.phi
        elif other.phi is None:
            phi = self.phi
        else:
            phi = self.phi.compose(other.phi)
        return AlgebraMap(self.poset, self.field, u=u, sigma=sigma, phi=phi)

    def __eq__(self, other):
        return (
            isinstance(other, AlgebraMap)
            and other.poset == self.poset
            and other.field == self.field
            and other.table() == self.table()
        )

    def __hash__(self):
        return hash((self.poset, self.field, self.table()))

    def __repr__(self):
        parts = []
        if self.u is not None:
            parts.append("inner")
        if self.sigma is not None:
            parts.append("scale")
        if self.phi is not None:
            parts.append("transpose" if self.anti else "relabel")
        return f"AlgebraMap({' . '.join(parts) or 'id'})"


def compose_canonical(maps):
    """Fold a sequence of maps (applied right to left) into one composite;
    the result agrees with the sequence on the whole basis."""
    if not maps:
        raise ValueError("nothing to compose")
    acc = maps[0]
    for m in maps[1:]:
        acc = acc.compose(m)
    return acc
