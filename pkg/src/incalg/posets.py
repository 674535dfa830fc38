"""Finite posets, their order-preserving/reversing bijections, and the
structure an order involution induces on elements and components."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import permutations

from .errors import BoundExceededError, CycleError, NotInvolutionError

AUTO = "automorphism"
ANTI = "anti-automorphism"

MAX_ENUM_SIZE = 10
MAX_CORPUS_SIZE = 6
_LABELS = "abcdefghij"


class Poset:
    """Immutable finite poset over sortable labels.

    The relation is stored in full (reflexive, antisymmetric, transitive);
    covers, components, a canonical linear extension and interval tables are
    precomputed at construction.
    """

    def __init__(self, elements, relation):
        elements = tuple(sorted(set(elements)))
        if not elements:
            raise ValueError("a poset needs at least one element")
        elset = set(elements)
        rel = set()
        for x, y in relation:
            if x not in elset or y not in elset:
                raise ValueError(f"unknown label in relation: {(x, y)!r}")
            rel.add((x, y))
        for x in elements:
            rel.add((x, x))
        for x, y in rel:
            if x != y and (y, x) in rel:
                raise CycleError(f"cycle through {x!r} and {y!r}")
        for x, y in rel:
            for y2, z in rel:
                if y2 == y and (x, z) not in rel:
                    raise ValueError(f"relation not transitive at {(x, y, z)!r}")

        self.elements = elements
        self.le = frozenset(rel)

        self.down = {x: frozenset(a for a, b in rel if b == x) for x in elements}
        self.up = {x: frozenset(b for a, b in rel if a == x) for x in elements}

        strict = [(x, y) for x, y in rel if x != y]
        self.covers = frozenset(
            (x, y)
            for x, y in strict
            if not any(z != x and z != y and (x, z) in rel and (z, y) in rel
                       for z in elements)
        )

        self.components = self._split_components()
        self.comp_of = {
            x: j for j, comp in enumerate(self.components) for x in comp
        }
        self.component_least = tuple(comp[0] for comp in self.components)

        self.linext = self._linear_extension()
        pos = {x: i for i, x in enumerate(self.linext)}
        self.diag_pairs = tuple((x, x) for x in self.linext)
        self.strict_pairs = tuple(
            sorted(strict, key=lambda p: (pos[p[0]], pos[p[1]]))
        )
        self.pairs = self.diag_pairs + self.strict_pairs

        self.intervals = {}
        for x, y in self.pairs:
            self.intervals[(x, y)] = tuple(
                z for z in self.linext if (x, z) in self.le and (z, y) in self.le
            )

        self._subposets = {}
        self._hash = hash((self.elements, self.le))

    @property
    def size(self):
        return len(self.elements)

    def _split_components(self):
        parent = {x: x for x in self.elements}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for x, y in self.le:
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[rx] = ry
        groups = {}
        for x in self.elements:
            groups.setdefault(find(x), []).append(x)
        comps = sorted((tuple(sorted(g)) for g in groups.values()),
                       key=lambda c: c[0])
        return tuple(comps)

    def _linear_extension(self):
        remaining = set(self.elements)
        order = []
        while remaining:
            nxt = min(x for x in remaining
                      if all(y not in remaining or y == x for y in self.down[x]))
            order.append(nxt)
            remaining.discard(nxt)
        return tuple(order)

    def leq(self, x, y):
        return (x, y) in self.le

    def comparable(self, x, y):
        return (x, y) in self.le or (y, x) in self.le

    def interval(self, x, y):
        """All z with x <= z <= y; empty when x is not below y."""
        for lbl in (x, y):
            if lbl not in self.down:
                raise ValueError(f"unknown label {lbl!r}")
        return self.intervals.get((x, y), ())

    def all_comparable(self):
        """Elements comparable to every element of the poset."""
        full = set(self.elements)
        return tuple(x for x in self.elements
                     if set(self.down[x]) | set(self.up[x]) == full)

    def subposet(self, subset):
        subset = frozenset(subset)
        cached = self._subposets.get(subset)
        if cached is None:
            rel = [(x, y) for x, y in self.le if x in subset and y in subset]
            cached = Poset(subset, rel)
            self._subposets[subset] = cached
        return cached

    def component_union(self, indices):
        out = []
        for j in indices:
            out.extend(self.components[j])
        return frozenset(out)

    def components_subposet(self, indices):
        return self.subposet(self.component_union(indices))

    def __eq__(self, other):
        return (
            isinstance(other, Poset)
            and other.elements == self.elements
            and other.le == self.le
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        covers = " ".join(f"{x}<{y}" for x, y in sorted(self.covers))
        return f"Poset({' '.join(self.elements)}; {covers})"


def build_poset(labels, cover_pairs):
    """Build a poset from labels and generating pairs (reflexive-transitive
    closure); rejects duplicate labels, unknown labels and cycles."""
    labels = list(labels)
    if len(set(labels)) != len(labels):
        dup = next(x for x in labels if labels.count(x) > 1)
        raise ValueError(f"duplicate label {dup!r}")
    lset = set(labels)
    for x, y in cover_pairs:
        if x not in lset:
            raise ValueError(f"unknown label {x!r}")
        if y not in lset:
            raise ValueError(f"unknown label {y!r}")
        if x == y:
            raise ValueError(f"cover pair {x!r} < {x!r} is reflexive")

    succ = {x: set() for x in labels}
    for x, y in cover_pairs:
        succ[x].add(y)
    closure = set()
    for x in labels:
        seen = {x}
        stack = [x]
        while stack:
            cur = stack.pop()
            for nxt in succ[cur]:
                if nxt == x:
                    raise CycleError(f"cycle through {x!r}")
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        for y in seen:
            closure.add((x, y))
    return Poset(labels, closure)


class PosetMap:
    """Bijection of a poset onto itself, order-preserving or order-reversing."""

    def __init__(self, poset, mapping, kind):
        if kind not in (AUTO, ANTI):
            raise ValueError(f"kind must be {AUTO!r} or {ANTI!r}")
        elems = poset.elements
        if set(mapping) != set(elems) or set(mapping.values()) != set(elems):
            raise ValueError("mapping is not a bijection of the poset")
        leq = poset.leq
        for x in elems:
            for y in elems:
                image = leq(mapping[y], mapping[x]) if kind == ANTI \
                    else leq(mapping[x], mapping[y])
                if leq(x, y) != image:
                    raise ValueError(
                        f"mapping violates the {kind} law at {(x, y)!r}")
        self.poset = poset
        self.mapping = dict(mapping)
        self.kind = kind
        self._items = tuple(sorted(self.mapping.items()))
        self._hash = hash((poset, self._items, kind))

    @classmethod
    def identity(cls, poset):
        return cls(poset, {x: x for x in poset.elements}, AUTO)

    def __call__(self, x):
        return self.mapping[x]

    def inverse(self):
        return PosetMap(self.poset, {v: k for k, v in self.mapping.items()},
                        self.kind)

    def compose(self, other):
        """self after other."""
        if other.poset != self.poset:
            raise ValueError("maps live on different posets")
        mapping = {x: self.mapping[other.mapping[x]] for x in self.poset.elements}
        kind = ANTI if (self.kind == ANTI) != (other.kind == ANTI) else AUTO
        return PosetMap(self.poset, mapping, kind)

    def is_identity(self):
        return all(v == k for k, v in self.mapping.items())

    def is_involution(self):
        """Order-reversing and of order two (identity counts on antichains)."""
        leq = self.poset.leq
        for x in self.poset.elements:
            if self.mapping[self.mapping[x]] != x:
                return False
            for y in self.poset.elements:
                if leq(x, y) != leq(self.mapping[y], self.mapping[x]):
                    return False
        return True

    def orbit_pairs(self):
        """The 2-cycles {x, map(x)} with x != map(x), each listed once."""
        out = []
        for x in self.poset.elements:
            y = self.mapping[x]
            if x < y:
                out.append((x, y))
        return tuple(out)

    def restrict(self, subset):
        subset = frozenset(subset)
        if frozenset(self.mapping[x] for x in subset) != subset:
            raise ValueError("subset is not stable under the map")
        sub = self.poset.subposet(subset)
        return PosetMap(sub, {x: self.mapping[x] for x in subset}, self.kind)

    def __eq__(self, other):
        return (
            isinstance(other, PosetMap)
            and other.poset == self.poset
            and other._items == self._items
            and other.kind == self.kind
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        arrows = " ".join(f"{k}->{v}" for k, v in self._items)
        return f"PosetMap[{self.kind}]({arrows})"


def _check_size(poset, max_size):
    if poset.size > max_size:
        raise BoundExceededError(
            f"poset has {poset.size} elements, enumeration bound is {max_size}")


def _search_maps(poset, anti, order_two):
    elems = poset.elements
    n = len(elems)
    leq = poset.leq
    dn = {x: len(poset.down[x]) for x in elems}
    up = {x: len(poset.up[x]) for x in elems}

    def profile_ok(x, y):
        if anti:
            return dn[x] == up[y] and up[x] == dn[y]
        return dn[x] == dn[y] and up[x] == up[y]

    def consistent(x, y, mapping):
        for a, b in mapping.items():
            if anti:
                if leq(x, a) != leq(b, y) or leq(a, x) != leq(y, b):
                    return False
            else:
                if leq(x, a) != leq(y, b) or leq(a, x) != leq(b, y):
                    return False
        return True

    results = []
    mapping = {}
    taken = set()

    def extend(i):
        if i == n:
            results.append(dict(mapping))
            return
        x = elems[i]
        if x in mapping:
            extend(i + 1)
            return
        for y in elems:
            if y in taken or not profile_ok(x, y):
                continue
            if not consistent(x, y, mapping):
                continue
            if order_two and y != x:
                if y in mapping:
                    continue
                mapping[x] = y
                if not consistent(y, x, mapping):
                    del mapping[x]
                    continue
                mapping[y] = x
                taken.add(x)
                taken.add(y)
                extend(i + 1)
                del mapping[x], mapping[y]
                taken.discard(x)
                taken.discard(y)
            else:
                mapping[x] = y
                taken.add(y)
                extend(i + 1)
                del mapping[x]
                taken.discard(y)

    extend(0)
    return results


def automorphisms(poset, max_size=MAX_ENUM_SIZE):
    _check_size(poset, max_size)
    return [PosetMap(poset, m, AUTO) for m in _search_maps(poset, False, False)]


def anti_automorphisms(poset, max_size=MAX_ENUM_SIZE):
    _check_size(poset, max_size)
    return [PosetMap(poset, m, ANTI) for m in _search_maps(poset, True, False)]


def involutions(poset, max_size=MAX_ENUM_SIZE):
    """All order-reversing bijections of order two, in deterministic order."""
    _check_size(poset, max_size)
    return [PosetMap(poset, m, ANTI) for m in _search_maps(poset, True, True)]


@dataclass(frozen=True)
class InvolutionDecomposition:
    """Splitting induced by an order involution: `fixed` is the fixed-point
    set, the involution exchanges `lower` and `upper`, `lower` is closed
    downward and `upper` upward."""

    lower: frozenset
    upper: frozenset
    fixed: frozenset


def _require_involution(lam):
    if not lam.is_involution():
        raise NotInvolutionError(f"{lam!r} is not an order involution")


def decompose_involution(poset, lam):
    """Canonical decomposition: constraint propagation from the fixed points,
    remaining free orbits resolved by sending their least element downward."""
    _require_involution(lam)
    fixed = frozenset(x for x in poset.elements if lam(x) == x)
    side = {}
    queue = deque()

    def assign(x, s):
        if x in fixed:
            raise RuntimeError(
                f"involution decomposition tried to move fixed point {x!r}")
        cur = side.get(x)
        if cur == s:
            return
        if cur is not None:
            raise RuntimeError(
                f"involution decomposition is inconsistent at {x!r}")
        side[x] = s
        queue.append(x)

    def propagate():
        while queue:
            x = queue.popleft()
            s = side[x]
            assign(lam(x), 3 - s)
            neighbours = poset.down[x] if s == 1 else poset.up[x]
            for y in neighbours:
                if y != x:
                    assign(y, s)

    for f in sorted(fixed):
        for y in sorted(poset.down[f]):
            if y != f:
                assign(y, 1)
        for y in sorted(poset.up[f]):
            if y != f:
                assign(y, 2)
    propagate()

    for x in poset.elements:
        if x in fixed or x in side:
            continue
        assign(x, 1)
        propagate()

    lower = frozenset(x for x, s in side.items() if s == 1)
    upper = frozenset(x for x, s in side.items() if s == 2)
    dec = InvolutionDecomposition(lower, upper, fixed)
    _validate_decomposition(poset, lam, dec)
    return dec


def _validate_decomposition(poset, lam, dec):
    lower, upper, fixed = dec.lower, dec.upper, dec.fixed
    assert lower | upper | fixed == set(poset.elements)
    assert not (lower & upper) and not (lower & fixed) and not (upper & fixed)
    assert fixed == {x for x in poset.elements if lam(x) == x}
    for x in lower:
        assert lam(x) in upper, f"{x!r} in lower but image not in upper"
        for y in poset.down[x]:
            assert y in lower, f"lower not closed downward at {y!r}"
    for x in upper:
        assert lam(x) in lower, f"{x!r} in upper but image not in lower"
        for y in poset.up[x]:
            assert y in upper, f"upper not closed upward at {y!r}"


@dataclass(frozen=True)
class ComponentAction:
    """How an order involution permutes connected components.

    `perm` maps each component index to its image, `fixed` lists the indices
    kept in place, and `psets` records, for each fixed component, the slice
    of the element decomposition it contains."""

    perm: tuple
    fixed: tuple
    psets: dict = field(compare=False)

    @property
    def fixed_point_free(self):
        """Fixed components containing no fixed element."""
        return tuple(j for j in self.fixed if not self.psets[j][2])

    def orbit_reps(self):
        """One index per two-element component orbit, the smaller one."""
        return tuple(j for j, i in enumerate(self.perm) if j < i)


def component_action(poset, lam):
    _require_involution(lam)
    perm = []
    for j, comp in enumerate(poset.components):
        images = {poset.comp_of[lam(x)] for x in comp}
        if len(images) != 1:
            raise RuntimeError(f"component {j} not mapped onto a component")
        perm.append(images.pop())
    perm = tuple(perm)
    assert all(perm[perm[j]] == j for j in range(len(perm)))
    fixed = tuple(j for j, i in enumerate(perm) if i == j)
    dec = decompose_involution(poset, lam)
    psets = {}
    for j in fixed:
        comp = set(poset.components[j])
        psets[j] = (
            tuple(sorted(dec.lower & comp)),
            tuple(sorted(dec.upper & comp)),
            tuple(sorted(dec.fixed & comp)),
        )
    return ComponentAction(perm, fixed, psets)


def conjugate_involutions(lam, mu, max_size=MAX_ENUM_SIZE):
    """Whether some automorphism carries one involution to the other;
    returns the first witness in enumeration order."""
    if lam.poset != mu.poset:
        raise ValueError("involutions live on different posets")
    _require_involution(lam)
    _require_involution(mu)
    for alpha in automorphisms(lam.poset, max_size):
        if alpha.compose(lam) == mu.compose(alpha):
            return True, alpha
    return False, None


def all_posets(max_size):
    """All posets with up to `max_size` elements, one per isomorphism class,
    over the fixed label alphabet, in deterministic order."""
    if max_size > MAX_CORPUS_SIZE:
        raise BoundExceededError(
            f"poset corpus capped at {MAX_CORPUS_SIZE} elements")
    out = []
    for n in range(1, max_size + 1):
        labels = _LABELS[:n]
        positions = [(i, j) for i in range(n) for j in range(i + 1, n)]
        m = len(positions)
        seen = set()
        for mask in range(1 << m):
            strict = {positions[k] for k in range(m) if mask >> k & 1}
            if not _transitive(strict):
                continue
            canon = _canonical_key(n, strict)
            if canon in seen:
                continue
            seen.add(canon)
            relation = [(labels[i], labels[j]) for i, j in strict]
            out.append(Poset(labels, [(x, x) for x in labels] + relation))
    return out


def _transitive(strict):
    for a, b in strict:
        for c, d in strict:
            if b == c and (a, d) not in strict:
                return False
    return True


def _canonical_key(n, strict):
    best = None
    for perm in permutations(range(n)):
        relabeled = tuple(sorted((perm[i], perm[j]) for i, j in strict))
        if best is None or relabeled < best:
            best = relabeled
    return best
