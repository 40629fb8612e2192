"""Extension of a binary operation ``phi: X x Y -> Z`` to ``Phi: TX x TY -> TZ``.

Two independent constructions are provided and cross-checked:

* direct: ``Phi(a, b) = mult(T(x |-> T phi_x (b))(a))``, where ``phi_x`` is the
  left shift ``y |-> phi(x, y)``;
* via tensor: ``Phi(a, b) = T phi (a (x) b)``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .core import (DEFAULT_GUARD, DEFAULT_SAMPLES, DEFAULT_SEED, LawReport, TElement,
                   check_algebra_morphism, get_monad, kleisli_bind, materialize_carrier, pair_instances,
                   run_law)
from .errors import (CapabilityError, InvariantError, PreconditionError, ResourceGuardError,
                     ShapeError)
from .finset import BinOpTable, FinMap, all_maps, associativity_witness, bits, canonical_set
from .tensor import tensor
from .zoo import restrict, support


def left_shift_ext(monad, op, x):
    """``T phi_x``: the extension of the left shift at the point ``x``."""
    shift = op.left_shift(x)
    return lambda b: monad.fmap(shift, b)


def extend_direct(monad, op, a, b):
    _check_args(op, a, b)
    shifts = op.left_shifts
    return kleisli_bind(monad, a, lambda i: monad.fmap(shifts[i], b))


def extend_via_tensor(monad, op, a, b):
    _check_args(op, a, b)
    return monad.fmap(op.as_map(), tensor(monad, a, b))


ROUTES = {"direct": extend_direct, "tensor": extend_via_tensor}


def _check_args(op, a, b):
    if not (a.base is op.left or a.base == op.left) or not (b.base is op.right or b.base == op.right):
        raise ShapeError("arguments do not live over the operation's carriers")


@dataclass
class ExtendedOp:
    """The extended operation on materialized carriers, or lazily for prob."""

    kind: str
    op: BinOpTable
    provenance: str = "direct"
    left: object = None
    right: object = None
    out: object = None
    table: tuple | None = None

    def __call__(self, a, b):
        monad = get_monad(self.kind)
        if self.table is not None:
            return self.out.members[self.table[self.left.members.index(a)][self.right.members.index(b)]]
        return ROUTES[self.provenance](monad, self.op, a, b)

    def rows(self):
        return [[self.out[v] for v in row] for row in self.table]


def extended_cayley_table(monad, op, allow_nonassociative=False, guard=DEFAULT_GUARD):
    """Full table of ``Phi`` over ``TX x TY``, built by both constructions.

    A cell where the constructions disagree raises :class:`InvariantError`.
    """
    if op.is_square and not allow_nonassociative:
        w = associativity_witness(op)
        if w is not None:
            raise PreconditionError(
                "operation is not associative at (%s,%s,%s)" % tuple(op.left[i] for i in w))
    elif not op.is_square and not allow_nonassociative:
        raise PreconditionError("a Cayley table needs an operation X x X -> X")
    tx = materialize_carrier(monad, op.left, guard)
    ty = materialize_carrier(monad, op.right, guard)
    tz = materialize_carrier(monad, op.out, guard)
    pos = {e: k for k, e in enumerate(tz.members)}
    rows = []
    for a in tx.members:
        row = []
        for b in ty.members:
            d = extend_direct(monad, op, a, b)
            t = extend_via_tensor(monad, op, a, b)
            if d != t:
                raise InvariantError(f"direct and tensor extensions disagree at ({a}, {b}): {d} vs {t}")
            row.append(pos[d])
        rows.append(tuple(row))
    return ExtendedOp(monad.kind, op, "direct", tx, ty, tz, tuple(rows))


def idempotents(ext):
    return [e for k, e in enumerate(ext.left.members) if ext.table[k][k] == k]


def oracle_setwise(op, a, b):
    """``{phi(x, y) : x in A, y in B}``."""
    mask = 0
    for i in bits(a.payload):
        for j in bits(b.payload):
            mask |= 1 << op(i, j)
    return TElement("exp", op.out, mask)


def oracle_convolution(op, a, b):
    """Push-forward of the product measure along ``phi``."""
    acc = {}
    for i, v in a.payload:
        for j, w in b.payload:
            z = op(i, j)
            acc[z] = acc.get(z, Fraction(0)) + v * w
    return TElement("prob", op.out, tuple(sorted(acc.items())))


ORACLES = {
    "exp": oracle_setwise,
    "prob": oracle_convolution,
    "id": lambda op, a, b: TElement("id", op.out, op(a.payload, b.payload)),
}


def check_oracle(monad, op, mode="exhaustive", seed=DEFAULT_SEED, samples=DEFAULT_SAMPLES,
                 guard=DEFAULT_GUARD, route="direct"):
    oracle = ORACLES.get(monad.kind)
    name = f"oracle[{monad.kind}]"
    if oracle is None:
        return LawReport(name, "skipped", 0, mode, note="no independent oracle for this monad")
    phi = ROUTES[route]
    cases, eff, note = pair_instances(monad, [op.left, op.right], mode, seed, samples, guard)
    return run_law(name, cases, lambda a, b: (phi(monad, op, a, b), oracle(op, a, b)),
                   eff, note, ["a", "b"])


def check_uniqueness(monad, op, mode="exhaustive", seed=DEFAULT_SEED, samples=DEFAULT_SAMPLES,
                     guard=DEFAULT_GUARD):
    """The direct and tensor constructions agree everywhere."""
    cases, eff, note = pair_instances(monad, [op.left, op.right], mode, seed, samples, guard)
    return run_law(f"uniqueness[{monad.kind}]", cases,
                   lambda a, b: (extend_direct(monad, op, a, b), extend_via_tensor(monad, op, a, b)),
                   eff, note, ["a", "b"])


def check_left_shifts(monad, op, mode="exhaustive", seed=DEFAULT_SEED, samples=DEFAULT_SAMPLES,
                      guard=DEFAULT_GUARD, route="direct"):
    """``Phi(unit(x), b) == T phi_x (b)``."""
    phi = ROUTES[route]
    cases, eff, note = pair_instances(monad, [op.right], mode, seed, samples, guard)
    cases = [(x, b) for (b,) in cases for x in range(len(op.left))]
    return run_law(f"left_shift[{monad.kind}]", cases,
                   lambda x, b: (phi(monad, op, monad.unit(op.left, x), b),
                                 left_shift_ext(monad, op, x)(b)),
                   eff, note, ["x", "b"])


def check_extension_axioms(monad, op, mode="exhaustive", seed=DEFAULT_SEED,
                           samples=DEFAULT_SAMPLES, guard=DEFAULT_GUARD, route="direct"):
    """Unit compatibility, right shifts and left shifts at points being
    morphisms of free algebras."""
    phi = ROUTES[route]
    x, y, z = op.left, op.right, op.out
    unit_cases = ((i, j) for i in range(len(x)) for j in range(len(y)))
    unit = run_law("unit", unit_cases,
                   lambda i, j: (phi(monad, op, monad.unit(x, i), monad.unit(y, j)),
                                 monad.unit(z, op(i, j))),
                   labels=["x", "y"])

    bs, eff, note = pair_instances(monad, [y], mode, seed, samples // 100 or 1, guard)
    right_reports = []
    for (b,) in bs:
        r = check_algebra_morphism(monad, lambda a, b=b: phi(monad, op, a, b), x, z, mode,
                                   seed, samples // 100 or 1, guard, name=f"right_shift[{b}]")
        right_reports.append(r)
        if not r.passed:
            break
    right = LawReport.combine("right_shifts", right_reports)

    left_reports = []
    for i in range(len(x)):
        ux = monad.unit(x, i)
        r = check_algebra_morphism(monad, lambda b, ux=ux: phi(monad, op, ux, b), y, z, mode,
                                   seed, samples // 100 or 1, guard, name=f"left_shift[{x[i]}]")
        left_reports.append(r)
        if not r.passed:
            break
    left = LawReport.combine("left_shifts_at_points", left_reports)
    return LawReport.combine(f"extension_axioms[{monad.kind}]", [unit, right, left])


def check_extension_associativity(monad, op, mode="exhaustive", seed=DEFAULT_SEED,
                                  samples=DEFAULT_SAMPLES, guard=DEFAULT_GUARD):
    """``Phi(Phi(a, b), c) == Phi(a, Phi(b, c))`` over triples of ``TX``.

    Runs for any square operation so that a non-associative input can be
    shown to give a non-associative extension.
    """
    if not op.is_square:
        raise ShapeError("associativity needs an operation X x X -> X")
    x = op.left
    details = {"phi_associative": associativity_witness(op) is None}
    name = f"extension_associativity[{monad.kind}]"
    if mode == "exhaustive" and monad.enumerable:
        try:
            ext = extended_cayley_table(monad, op, allow_nonassociative=True, guard=guard)
        except (CapabilityError, ResourceGuardError):
            ext = None
        if ext is not None and len(ext.left) ** 3 <= guard:
            t = ext.table
            members = ext.left.members
            pos = {e: k for k, e in enumerate(members)}

            def lookup(a, b, c):
                i, j, k = pos[a], pos[b], pos[c]
                return members[t[t[i][j]][k]], members[t[i][t[j][k]]]

            return run_law(name, itertools.product(members, repeat=3), lookup, "exhaustive",
                           labels=["a", "b", "c"], details=details)
    cases, eff, note = pair_instances(monad, [x, x, x], mode, seed, samples, guard)

    def sides(a, b, c):
        return (extend_direct(monad, op, extend_direct(monad, op, a, b), c),
                extend_direct(monad, op, a, extend_direct(monad, op, b, c)))

    return run_law(name, cases, sides, eff, note, ["a", "b", "c"], details)


def check_homomorphism(monad, phi, psi, h_x, h_y, h_z, mode="exhaustive", seed=DEFAULT_SEED,
                       samples=DEFAULT_SAMPLES, guard=DEFAULT_GUARD):
    """If ``psi(h_X x h_Y) == h_Z phi`` then ``Psi(T h_X a, T h_Y b) == T h_Z Phi(a, b)``."""
    for i in range(len(phi.left)):
        for j in range(len(phi.right)):
            if psi(h_x(i), h_y(j)) != h_z(phi(i, j)):
                raise PreconditionError(
                    f"premise fails at ({phi.left[i]},{phi.right[j]}): "
                    f"psi gives {psi.out[psi(h_x(i), h_y(j))]}, h_Z(phi) gives {h_z.codomain[h_z(phi(i, j))]}")
    cases, eff, note = pair_instances(monad, [phi.left, phi.right], mode, seed, samples, guard)

    def sides(a, b):
        return (extend_direct(monad, psi, monad.fmap(h_x, a), monad.fmap(h_y, b)),
                monad.fmap(h_z, extend_direct(monad, phi, a, b)))

    return run_law(f"homomorphism[{monad.kind}]", cases, sides, eff, note, ["a", "b"])


def check_closure(monad, op, mode="exhaustive", seed=DEFAULT_SEED, samples=DEFAULT_SAMPLES,
                  guard=DEFAULT_GUARD):
    """Supports are closed under ``Phi`` and ``Phi`` factors through the supports.

    For ``A = supp a`` and ``B = supp b``: ``supp Phi(a, b)`` lies inside
    ``phi(A x B)``, and ``Phi(a, b) == T phi_AB (a' (x) b')`` where ``a'``,
    ``b'`` are the preimages of ``a``, ``b`` over ``A``, ``B`` and
    ``phi_AB`` is ``phi`` restricted to ``A x B``.
    """
    pairs, eff, note = pair_instances(monad, [op.left, op.right], mode, seed, samples, guard)
    pairs = list(pairs)

    def image(ma, mb):
        out = 0
        for i in bits(ma):
            for j in bits(mb):
                out |= 1 << op(i, j)
        return out

    def support_sides(a, b):
        s = support(monad, extend_direct(monad, op, a, b))
        img = image(support(monad, a), support(monad, b))
        return s & ~img, 0

    def factor_sides(a, b):
        ma, mb = support(monad, a), support(monad, b)
        ra, rb = restrict(monad, a, ma), restrict(monad, b, mb)
        ia, ib = list(bits(ma)), list(bits(mb))
        phi_ab = BinOpTable(ra.base, rb.base, op.out, [[op(i, j) for j in ib] for i in ia])
        return extend_direct(monad, op, a, b), monad.fmap(phi_ab.as_map(), tensor(monad, ra, rb))

    subs = [
        run_law("support_closure", pairs, support_sides, eff, note, ["a", "b"]),
        run_law("support_factorization", pairs, factor_sides, eff, note, ["a", "b"]),
    ]
    return LawReport.combine(f"closure[{monad.kind}]", subs)


def semigroup_endomorphisms(op):
    """Maps ``h: X -> X`` with ``h(phi(x, y)) == phi(h x, h y)``."""
    return [h for h in all_maps(op.left, op.left)
            if all(h(op(i, j)) == op(h(i), h(j))
                   for i in range(len(op.left)) for j in range(len(op.left)))]


def random_premise_triple(rng, max_size=3):
    """A random ``(phi, psi, h_X, h_Y, h_Z)`` satisfying ``psi(h_X x h_Y) == h_Z phi``."""
    while True:
        sx, sy, sz = (rng.randint(1, max_size) for _ in range(3))
        tx, ty, tz = (rng.randint(1, max_size) for _ in range(3))
        X, Y, Z = canonical_set(sx), canonical_set(sy), canonical_set(sz)
        X2, Y2, Z2 = canonical_set(tx), canonical_set(ty), canonical_set(tz)
        h_x = FinMap(X, X2, [rng.randrange(tx) for _ in range(sx)])
        h_y = FinMap(Y, Y2, [rng.randrange(ty) for _ in range(sy)])
        h_z = FinMap(Z, Z2, [rng.randrange(tz) for _ in range(sz)])
        psi = BinOpTable(X2, Y2, Z2, [[rng.randrange(tz) for _ in range(ty)] for _ in range(tx)])
        fibers = {}
        for k in range(sz):
            fibers.setdefault(h_z(k), []).append(k)
        rows = []
        ok = True
        for i in range(sx):
            row = []
            for j in range(sy):
                fiber = fibers.get(psi(h_x(i), h_y(j)))
                if not fiber:
                    ok = False
                    break
                row.append(rng.choice(fiber))
            if not ok:
                break
            rows.append(row)
        if ok:
            return BinOpTable(X, Y, Z, rows), psi, h_x, h_y, h_z
