"""Finite carriers, total maps between them and binary operation tables.

Atoms are strings. The atom at position ``i`` of a :class:`FinSet` is
addressed everywhere by its index ``i``; subsets of a carrier are int
bitmasks over those indices.

Pair atoms are written ``(l,r)`` and product carriers are laid out in
row-major order, so the pair ``(i, j)`` of ``X x Y`` has index
``i * len(Y) + j``.  Consequently ``(X x Y) x Z`` and ``X x (Y x Z)`` share
the same index for every triple: the reassociation bijection
``((x,y),z) <-> (x,(y,z))`` is the identity on indices (see
:func:`reassociate`).
"""
from __future__ import annotations

import itertools
from functools import cached_property, lru_cache

from .errors import CompositionError, ResourceGuardError, ShapeError

RESERVED = "(),"


def bits(mask):
    """Indices of the set bits of ``mask``, ascending."""
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def popcount(mask):
    return bin(mask).count("1")


class FinSet:
    """An ordered finite set of atom labels.

    A carrier of monad elements (``TX`` materialized, or the image set of a
    Kleisli map) additionally keeps ``members``: the element behind each
    atom.  Its labels are the rendered members and are only built on demand,
    and two carriers are equal when their members are.
    """

    def __init__(self, elements=None, members=None):
        if members is not None:
            self.members = tuple(members)
            if elements is not None:
                self.__dict__["labels"] = tuple(elements)
        else:
            self.members = None
            labels = tuple(elements)
            if len(set(labels)) != len(labels):
                raise ShapeError(f"duplicate atom labels in {labels!r}")
            self.__dict__["labels"] = labels

    @classmethod
    def of_size(cls, n):
        return canonical_set(n)

    @cached_property
    def labels(self):
        labels = tuple(str(m) for m in self.members)
        if len(set(labels)) != len(labels):
            raise ShapeError("carrier members are not distinct")
        return labels

    @cached_property
    def _index(self):
        return {label: i for i, label in enumerate(self.labels)}

    @cached_property
    def _hash(self):
        if self.members is not None:
            return hash(self.members)
        return hash(self.labels)

    def __len__(self):
        if self.members is not None:
            return len(self.members)
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    def __getitem__(self, i):
        return self.labels[i]

    def __contains__(self, label):
        return label in self._index

    def index(self, label):
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"{label!r} is not an atom of this set") from None

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, FinSet):
            return NotImplemented
        if (self.members is None) != (other.members is None):
            return False
        if self.members is not None:
            return self.members == other.members
        return self.labels == other.labels

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return "FinSet({" + ",".join(self.labels) + "})"

    @property
    def full_mask(self):
        return (1 << len(self)) - 1

    def subset(self, mask):
        """The sub-carrier on the atoms of ``mask``, in ambient order."""
        idx = list(bits(mask))
        if self.members is not None:
            return FinSet(members=[self.members[i] for i in idx])
        return FinSet([self.labels[i] for i in idx])

    def render_subset(self, mask):
        return "{" + ",".join(self.labels[i] for i in bits(mask)) + "}"


@lru_cache(maxsize=None)
def canonical_set(n):
    """The generated set ``{0, ..., n-1}``."""
    return FinSet([str(i) for i in range(n)])


def pair_label(left, right):
    return f"({left},{right})"


@lru_cache(maxsize=256)
def product(x, y):
    """Cartesian product with atoms ``(l,r)`` in row-major order."""
    return FinSet([pair_label(a, b) for a in x.labels for b in y.labels])


class FinMap:
    """A total function between finite sets, stored as a table of indices."""

    __slots__ = ("domain", "codomain", "table")

    def __init__(self, domain, codomain, table):
        table = tuple(table)
        if len(table) != len(domain):
            raise ShapeError(f"map table has {len(table)} entries, domain has {len(domain)}")
        n = len(codomain)
        for i, v in enumerate(table):
            if not 0 <= v < n:
                raise ShapeError(f"map sends {i} to {v}, outside codomain of size {n}")
        self.domain = domain
        self.codomain = codomain
        self.table = table

    @classmethod
    def from_function(cls, domain, codomain, fn):
        return cls(domain, codomain, [fn(i) for i in range(len(domain))])

    @classmethod
    def from_labels(cls, domain, codomain, mapping):
        return cls(domain, codomain, [codomain.index(mapping[a]) for a in domain.labels])

    def __call__(self, i):
        return self.table[i]

    def image_mask(self, mask):
        out = 0
        t = self.table
        for i in bits(mask):
            out |= 1 << t[i]
        return out

    def __eq__(self, other):
        if not isinstance(other, FinMap):
            return NotImplemented
        return (self.table == other.table and self.domain == other.domain
                and self.codomain == other.codomain)

    def __hash__(self):
        return hash(self.table)

    def __repr__(self):
        pairs = ", ".join(f"{a}->{self.codomain[v]}" for a, v in zip(self.domain, self.table))
        return f"FinMap({pairs})"


def identity(x):
    return FinMap(x, x, range(len(x)))


def constant(x, y, j):
    return FinMap(x, y, [j] * len(x))


def compose(g, f):
    """``g o f``: apply ``f`` first."""
    if f.codomain != g.domain:
        raise CompositionError(f"cannot compose: codomain {f.codomain!r} != domain {g.domain!r}")
    gt = g.table
    return FinMap(f.domain, g.codomain, [gt[v] for v in f.table])


def all_maps(x, y):
    """Every total map ``x -> y``, lexicographic in the table."""
    for table in itertools.product(range(len(y)), repeat=len(x)):
        yield FinMap(x, y, table)


def map_product(f, g):
    """``f x g : X x Y -> X' x Y'``."""
    ny = len(g.codomain)
    table = [f.table[i] * ny + g.table[j]
             for i in range(len(f.domain)) for j in range(len(g.domain))]
    return FinMap(product(f.domain, g.domain), product(f.codomain, g.codomain), table)


def pair_injection(x, y, i):
    """``y |-> (x_i, y)`` as a map ``Y -> X x Y``."""
    n = len(y)
    return FinMap(y, product(x, y), [i * n + j for j in range(n)])


def reassociate(x, y, z):
    """The bijection ``(X x Y) x Z -> X x (Y x Z)``; identity on indices."""
    left = product(product(x, y), z)
    return FinMap(left, product(x, product(y, z)), range(len(left)))


class BinOpTable:
    """A binary operation ``X x Y -> Z`` given by its full table."""

    def __init__(self, left, right, out, table):
        rows = tuple(tuple(r) for r in table)
        if len(rows) != len(left) or any(len(r) != len(right) for r in rows):
            raise ShapeError(f"table must be {len(left)}x{len(right)}")
        n = len(out)
        for i, r in enumerate(rows):
            for j, v in enumerate(r):
                if not 0 <= v < n:
                    raise ShapeError(f"cell ({i},{j}) = {v} is not an index into the output set")
        self.left = left
        self.right = right
        self.out = out
        self.table = rows

    @classmethod
    def square(cls, x, table):
        return cls(x, x, x, table)

    @classmethod
    def from_function(cls, left, right, out, fn):
        return cls(left, right, out,
                   [[fn(i, j) for j in range(len(right))] for i in range(len(left))])

    def __call__(self, i, j):
        return self.table[i][j]

    @property
    def is_square(self):
        return self.left == self.right == self.out

    @cached_property
    def left_shifts(self):
        return tuple(FinMap(self.right, self.out, row) for row in self.table)

    def left_shift(self, i):
        """``y |-> phi(x_i, y)``."""
        return self.left_shifts[i]

    def right_shift(self, j):
        """``x |-> phi(x, y_j)``."""
        return FinMap(self.left, self.out, [row[j] for row in self.table])

    def as_map(self):
        """The operation as a map ``X x Y -> Z`` on the product carrier."""
        return FinMap(product(self.left, self.right), self.out,
                      [v for row in self.table for v in row])

    def pullback(self, f_left, f_right):
        """``phi o (f_left x f_right)`` for maps into the two argument sets."""
        return BinOpTable(f_left.domain, f_right.domain, self.out,
                          [[self.table[f_left(a)][f_right(b)] for b in range(len(f_right.domain))]
                           for a in range(len(f_left.domain))])

    def __eq__(self, other):
        if not isinstance(other, BinOpTable):
            return NotImplemented
        return (self.table == other.table and self.left == other.left
                and self.right == other.right and self.out == other.out)

    def __hash__(self):
        return hash(self.table)

    def __repr__(self):
        return f"BinOpTable({self.table})"


def is_associative(op):
    if not op.is_square:
        raise ShapeError("associativity needs an operation X x X -> X")
    return associativity_witness(op) is None


def associativity_witness(op):
    """First triple ``(x, y, z)`` with ``(xy)z != x(yz)``, or None."""
    t = op.table
    r = range(len(t))
    for x in r:
        for y in r:
            xy = t[x][y]
            for z in r:
                if t[xy][z] != t[x][t[y][z]]:
                    return (x, y, z)
    return None


MAX_ENUM_N = 4


def enumerate_binary_ops(n, associative_only=False):
    """All binary operations on ``{0..n-1}``, tables in lexicographic order.

    With ``associative_only`` the tables are built cell by cell and a branch
    is cut as soon as a fully determined triple breaks associativity.
    """
    if n < 1:
        raise ShapeError("n must be positive")
    if n > MAX_ENUM_N:
        raise ResourceGuardError(f"n={n} exceeds the enumeration guard n<={MAX_ENUM_N}")
    x = canonical_set(n)
    if not associative_only:
        for flat in itertools.product(range(n), repeat=n * n):
            yield BinOpTable.square(x, [flat[i * n:(i + 1) * n] for i in range(n)])
        return
    yield from _associative_tables(n, x)


def _associative_tables(n, x):
    t = [[-1] * n for _ in range(n)]
    cells = [(i, j) for i in range(n) for j in range(n)]
    triples = list(itertools.product(range(n), repeat=3))

    def consistent():
        for a, b, c in triples:
            ab = t[a][b]
            bc = t[b][c]
            if ab < 0 or bc < 0:
                continue
            lhs = t[ab][c]
            rhs = t[a][bc]
            if lhs >= 0 and rhs >= 0 and lhs != rhs:
                return False
        return True

    def fill(k):
        if k == len(cells):
            yield BinOpTable.square(x, t)
            return
        i, j = cells[k]
        for v in range(n):
            t[i][j] = v
            if consistent():
                yield from fill(k + 1)
        t[i][j] = -1

    yield from fill(0)


def cyclic_group(n):
    """Addition modulo ``n`` on ``{0..n-1}``."""
    x = canonical_set(n)
    return BinOpTable.from_function(x, x, x, lambda i, j: (i + j) % n)


def left_zero(n):
    x = canonical_set(n)
    return BinOpTable.from_function(x, x, x, lambda i, j: i)
