"""Incidence algebra of a finite poset: convolution, unity, inversion,
center, and componentwise restriction.

Functions are stored densely over the order relation; pairs outside the
relation are unrepresentable and read back as zero.
"""

from __future__ import annotations

from .errors import FieldMismatchError, NotInvertibleError


class IncidenceFunction:
    """Field-valued function on the comparable pairs of a poset."""

    __slots__ = ("poset", "field", "entries", "_key")

    def __init__(self, poset, field, entries):
        # internal constructor: entries must be complete over poset.pairs
        self.poset = poset
        self.field = field
        self.entries = entries
        self._key = None

    @classmethod
    def from_entries(cls, poset, field, mapping):
        """Build from a partial assignment; missing pairs are zero."""
        zero = field.zero
        entries = {}
        for pair in poset.pairs:
            entries[pair] = zero
        for pair, value in mapping.items():
            if pair not in entries:
                raise ValueError(f"pair {pair!r} is not in the order relation")
            entries[pair] = field.scalar(value)
        return cls(poset, field, entries)

    @classmethod
    def delta(cls, poset, field):
        """The unity: 1 on the diagonal, 0 elsewhere."""
        one, zero = field.one, field.zero
        entries = {p: zero for p in poset.strict_pairs}
        for p in poset.diag_pairs:
            entries[p] = one
        return cls(poset, field, entries)

    @classmethod
    def basis_element(cls, poset, field, x, y):
        """Indicator of a single comparable pair."""
        if (x, y) not in poset.le:
            raise ValueError(f"pair {(x, y)!r} is not in the order relation")
        f = cls.delta(poset, field)
        entries = {p: field.zero for p in poset.pairs}
        entries[(x, y)] = field.one
        return cls(poset, field, entries)

    @classmethod
    def diagonal(cls, poset, field, values):
        """Diagonal function from a per-element assignment."""
        entries = {p: field.zero for p in poset.strict_pairs}
        for x in poset.elements:
            entries[(x, x)] = field.scalar(values[x])
        return cls(poset, field, entries)

    def _check(self, other):
        if other.poset != self.poset:
            raise ValueError("incidence functions live on different posets")
        if other.field != self.field:
            raise FieldMismatchError(
                f"mixed fields {self.field} and {other.field}")

    def __call__(self, x, y):
        got = self.entries.get((x, y))
        if got is not None:
            return got
        if x not in self.poset.down or y not in self.poset.down:
            raise ValueError(f"unknown label in {(x, y)!r}")
        return self.field.zero

    def __add__(self, other):
        self._check(other)
        mine, theirs = self.entries, other.entries
        return IncidenceFunction(
            self.poset, self.field,
            {p: mine[p] + theirs[p] for p in self.poset.pairs})

    def __sub__(self, other):
        self._check(other)
        mine, theirs = self.entries, other.entries
        return IncidenceFunction(
            self.poset, self.field,
            {p: mine[p] - theirs[p] for p in self.poset.pairs})

    def scale(self, scalar):
        scalar = self.field.scalar(scalar)
        return IncidenceFunction(
            self.poset, self.field,
            {p: scalar * v for p, v in self.entries.items()})

    def __mul__(self, other):
        """Convolution: (fg)(x, y) = sum over x <= z <= y of f(x,z)g(z,y)."""
        self._check(other)
        mine, theirs = self.entries, other.entries
        intervals = self.poset.intervals
        out = {}
        for pair in self.poset.pairs:
            x, y = pair
            acc = None
            for z in intervals[pair]:
                term = mine[(x, z)] * theirs[(z, y)]
                acc = term if acc is None else acc + term
            out[pair] = acc
        return IncidenceFunction(self.poset, self.field, out)

    @property
    def is_unit(self):
        return all(not self.entries[(x, x)].is_zero for x in self.poset.elements)

    def inverse(self):
        """Triangular recursion; exists iff every diagonal entry is nonzero."""
        for x in self.poset.elements:
            if self.entries[(x, x)].is_zero:
                raise NotInvertibleError(x)
        ent = self.entries
        out = {}
        for x in self.poset.elements:
            out[(x, x)] = ent[(x, x)].inverse()
        for pair in sorted(self.poset.strict_pairs,
                           key=lambda p: len(self.poset.intervals[p])):
            x, y = pair
            acc = None
            for z in self.poset.intervals[pair]:
                if z == x:
                    continue
                term = ent[(x, z)] * out[(z, y)]
                acc = term if acc is None else acc + term
            out[pair] = -(out[(x, x)] * acc)
        return IncidenceFunction(self.poset, self.field, out)

    @property
    def is_diagonal(self):
        return all(self.entries[p].is_zero for p in self.poset.strict_pairs)

    @property
    def is_central(self):
        """Diagonal and constant on each connected component."""
        if not self.is_diagonal:
            return False
        for comp in self.poset.components:
            first = self.entries[(comp[0], comp[0])]
            if any(self.entries[(x, x)] != first for x in comp[1:]):
                return False
        return True

    def restrict(self, indices):
        """Restriction to the union of the given connected components."""
        indices = sorted(set(indices))
        if not indices:
            raise ValueError("restriction needs a nonempty set of components")
        sub = self.poset.components_subposet(indices)
        entries = {p: self.entries[p] for p in sub.pairs}
        return IncidenceFunction(sub, self.field, entries)

    def restrict_elements(self, subset):
        sub = self.poset.subposet(subset)
        entries = {p: self.entries[p] for p in sub.pairs}
        return IncidenceFunction(sub, self.field, entries)

    def key(self):
        """Hashable canonical snapshot of the entries, in pair order."""
        if self._key is None:
            self._key = tuple(self.entries[p].value for p in self.poset.pairs)
        return self._key

    def __eq__(self, other):
        return (
            isinstance(other, IncidenceFunction)
            and other.poset == self.poset
            and other.field == self.field
            and other.key() == self.key()
        )

    def __hash__(self):
        return hash((self.poset, self.field, self.key()))

    def __repr__(self):
        shown = ", ".join(
            f"({x},{y})={v}" for (x, y), v in
            ((p, self.entries[p]) for p in self.poset.pairs)
            if not v.is_zero)
        return f"IncidenceFunction[{shown or '0'}]"


def delta(poset, field):
    return IncidenceFunction.delta(poset, field)


def basis(poset, field):
    """The single-pair indicator basis, in linear-extension pair order."""
    return [IncidenceFunction.basis_element(poset, field, x, y)
            for x, y in poset.pairs]


def center_basis(poset, field):
    """One component-indicator diagonal per connected component."""
    out = []
    for comp in poset.components:
        out.append(IncidenceFunction.diagonal(
            poset, field,
            {x: field.one if x in comp else field.zero for x in poset.elements}))
    return out


def center_by_commutant(poset, field):
    """Independent route to the center: solve [f, e] = 0 for every basis
    indicator e by exact Gaussian elimination and return a nullspace basis."""
    pairs = list(poset.pairs)
    col = {p: i for i, p in enumerate(pairs)}
    zero = field.zero
    rows = []
    for a, b in pairs:
        # (e_ab f - f e_ab)(x, y) = [x == a][b <= y] f(b, y) - [y == b][x <= a] f(x, a)
        for x, y in pairs:
            coeffs = {}
            if x == a and poset.leq(b, y):
                coeffs[(b, y)] = coeffs.get((b, y), zero) + field.one
            if y == b and poset.leq(x, a):
                coeffs[(x, a)] = coeffs.get((x, a), zero) - field.one
            if coeffs and any(not v.is_zero for v in coeffs.values()):
                row = [zero] * len(pairs)
                for p, v in coeffs.items():
                    row[col[p]] = v
                rows.append(row)
    null = nullspace(rows, len(pairs), field)
    out = []
    for vec in null:
        out.append(IncidenceFunction(
            poset, field, {p: vec[col[p]] for p in pairs}))
    return out


def nullspace(rows, width, field):
    """Basis of the solution space of a homogeneous system, exact arithmetic."""
    matrix = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(width):
        pivot = next((i for i in range(r, len(matrix))
                      if not matrix[i][c].is_zero), None)
        if pivot is None:
            continue
        matrix[r], matrix[pivot] = matrix[pivot], matrix[r]
        inv = matrix[r][c].inverse()
        matrix[r] = [v * inv for v in matrix[r]]
        for i in range(len(matrix)):
            if i != r and not matrix[i][c].is_zero:
                factor = matrix[i][c]
                matrix[i] = [a - factor * b for a, b in zip(matrix[i], matrix[r])]
        pivots.append(c)
        r += 1
        if r == len(matrix):
            break
    free = [c for c in range(width) if c not in pivots]
    basis_vecs = []
    for fc in free:
        vec = [field.zero] * width
        vec[fc] = field.one
        for ri, pc in enumerate(pivots):
            vec[pc] = -matrix[ri][fc]
        basis_vecs.append(vec)
    return basis_vecs


def random_function(poset, field, rng):
    return IncidenceFunction(
        poset, field, {p: field.random_scalar(rng) for p in poset.pairs})


def random_unit(poset, field, rng):
    entries = {p: field.random_scalar(rng) for p in poset.strict_pairs}
    for p in poset.diag_pairs:
        entries[p] = field.random_unit(rng)
    return IncidenceFunction(poset, field, entries)
