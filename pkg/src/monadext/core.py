"""Monads over finite carriers, free algebras and law checking.

A monad here is an object with ``unit``, ``fmap`` and ``mult``; concrete
instances live in :mod:`monadext.zoo`.  Elements of ``TX`` are
:class:`TElement` values in canonical form, so ``==`` is mathematical
equality.

An element of ``T(TX)`` is an element over a carrier ``FinSet`` whose
``members`` are elements of ``TX``.  The carrier may be all of ``TX``
(see :func:`materialize_carrier`) or any finite subset of it, e.g. the
image set produced by a Kleisli map; ``mult`` gives the same answer in both
cases because ``mult`` is natural in the carrier inclusion.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import CapabilityError, PreconditionError, ResourceGuardError, ShapeError
from .finset import FinMap, FinSet, all_maps, bits, compose, identity

DEFAULT_GUARD = 10**6
DEFAULT_SEED = 42
DEFAULT_SAMPLES = 10_000

MONADS = {}


def get_monad(kind):
    try:
        return MONADS[kind]
    except KeyError:
        raise ValueError(f"unknown monad kind {kind!r}; expected one of {sorted(MONADS)}") from None


class TElement:
    """A canonical element of ``T(base)`` for the monad ``kind``."""

    __slots__ = ("kind", "base", "payload")

    def __init__(self, kind, base, payload):
        self.kind = kind
        self.base = base
        self.payload = payload

    def __eq__(self, other):
        if not isinstance(other, TElement):
            return NotImplemented
        return (self.kind == other.kind and self.payload == other.payload
                and (self.base is other.base or self.base == other.base))

    def __hash__(self):
        return hash((self.kind, self.payload, len(self.base)))

    def sort_key(self):
        return self.payload

    def __str__(self):
        return get_monad(self.kind).render(self)

    def __repr__(self):
        return f"TElement({self.kind}, {self})"


def carrier_of(elements):
    """A carrier whose atoms are the given distinct elements, canonically sorted."""
    elements = sorted(set(elements), key=TElement.sort_key)
    if not elements:
        raise ShapeError("empty carrier")
    base = elements[0].base
    kind = elements[0].kind
    for e in elements:
        if e.kind != kind or not (e.base is base or e.base == base):
            raise ShapeError("carrier members must share one monad and one base set")
    return FinSet(members=elements)


class Monad:
    """Shared machinery for the concrete monads.

    Subclasses provide ``unit``, ``_fmap`` (along a :class:`FinMap`),
    ``mult``, ``support_mask``, ``validate``, ``random``, ``render`` and
    ``parse``; enumerable ones also ``elements`` and ``count``.
    """

    kind = None
    enumerable = True

    def __repr__(self):
        return f"<monad {self.kind}>"

    def elem(self, base, payload):
        return TElement(self.kind, base, payload)

    def fmap(self, f, a):
        """``Tf(a)``.

        ``f`` is either a :class:`FinMap` out of ``a.base`` or a callable
        taking an atom index of ``a.base`` to a :class:`TElement` (the
        Kleisli-style use).  A callable is only evaluated on the support of
        ``a``; the result then lives over the carrier of its images.
        """
        self._check(a)
        if isinstance(f, FinMap):
            if not (f.domain is a.base or f.domain == a.base):
                raise ShapeError(f"map domain {f.domain!r} does not match element base {a.base!r}")
            return self._fmap(f, a)
        sup = list(bits(self.support_mask(a)))
        images = {i: f(i) for i in sup}
        for v in images.values():
            if not isinstance(v, TElement):
                raise ShapeError(f"element-level map returned {v!r}, not a TElement")
        carrier = carrier_of(images.values())
        pos = {m: k for k, m in enumerate(carrier.members)}
        table = [0] * len(a.base)
        for i, v in images.items():
            table[i] = pos[v]
        return self._fmap(FinMap(a.base, carrier, table), a)

    def _check(self, a):
        if a.kind != self.kind:
            raise ShapeError(f"{self.kind} monad given a {a.kind} element")

    def members_of(self, m):
        if m.base.members is None:
            raise ShapeError("mult needs an element over a carrier of monad elements")
        return m.base.members

    def count(self, n):
        """``|T(n-set)|`` if it is within the enumeration bound, else None."""
        return None

    def elements(self, base):
        raise CapabilityError(f"{self.kind}: carrier is not enumerable")

    def support(self, a):
        return a.base.subset(self.support_mask(a))


def kleisli_bind(monad, a, k):
    """``mult(T k (a))`` for ``k`` sending atom indices of ``a.base`` to elements."""
    return monad.mult(monad.fmap(k, a))


def tmap(monad, h, m):
    """``Th(m)`` for a map ``h`` between element sets; ``m`` lives over a carrier."""
    members = monad.members_of(m)
    return monad.fmap(lambda i: h(members[i]), m)


@lru_cache(maxsize=128)
def _materialize(monad, x):
    return FinSet(members=monad.elements(x))


def materialize_carrier(monad, x, guard=DEFAULT_GUARD):
    """``TX`` as a FinSet whose atoms are the rendered elements, canonical order."""
    if not monad.enumerable:
        raise CapabilityError(f"{monad.kind}: TX is not enumerable")
    size = monad.count(len(x))
    if size is None or size > guard:
        raise ResourceGuardError(
            f"{monad.kind}: |T X| for |X|={len(x)} exceeds the enumeration guard")
    return _materialize(monad, x)


def tower(monad, x, level, guard=DEFAULT_GUARD):
    """The materialized carrier ``T^level X`` (``level`` 0 is ``x`` itself)."""
    c = x
    for _ in range(level):
        c = materialize_carrier(monad, c, guard)
    return c


def tower_count(monad, x, level, guard=DEFAULT_GUARD):
    """``|T^level X|`` when ``T^(level-1) X`` can be materialized, else None."""
    try:
        below = tower(monad, x, level - 1, guard)
    except (CapabilityError, ResourceGuardError):
        return None
    if not monad.enumerable:
        return None
    return monad.count(len(below))


# ---------------------------------------------------------------- sampling

def random_carrier(monad, x, level, rng, width=4):
    """A random finite subset of ``T^level X`` all over one base, as a carrier."""
    if level == 0:
        return x
    below = random_carrier(monad, x, level - 1, rng, width)
    k = rng.randint(1, width)
    return carrier_of(monad.random(below, rng) for _ in range(k))


def random_tower(monad, x, level, rng, guard=4096):
    """A random element of ``T^level X``.

    Uses the full materialized ``T^(level-1) X`` as base when it fits the
    (small) guard, otherwise a random finite sub-carrier.
    """
    try:
        base = tower(monad, x, level - 1, guard)
    except (CapabilityError, ResourceGuardError):
        base = random_carrier(monad, x, level - 1, rng)
    return monad.random(base, rng)


def instances(monad, x, level, mode, seed, samples, guard):
    """Elements of ``T^level X`` to quantify over.

    Returns ``(iterable, effective_mode, note)``; exhaustive requests that
    exceed the guard fall back to sampling and say so in ``note``.
    """
    note = None
    if mode == "exhaustive":
        n = tower_count(monad, x, level, guard)
        if n is not None and n <= guard:
            base = tower(monad, x, level - 1, guard)
            return list(monad.elements(base)), "exhaustive", None
        note = (f"exhaustive enumeration of T^{level}X infeasible "
                f"(|X|={len(x)}, guard {guard}); sampled instead")
    elif mode != "sampled":
        raise ValueError(f"unknown mode {mode!r}")
    rng = random.Random(seed)
    return (random_tower(monad, x, level, rng) for _ in range(samples)), "sampled", note


def pair_instances(monad, xs, mode, seed, samples, guard):
    """Tuples of elements of ``T xs[0] x T xs[1] x ...``."""
    if mode == "exhaustive":
        try:
            carriers = [materialize_carrier(monad, x, guard) for x in xs]
        except (CapabilityError, ResourceGuardError):
            carriers = None
        if carriers is not None:
            total = 1
            for c in carriers:
                total *= len(c)
            if total <= guard:
                return itertools.product(*(c.members for c in carriers)), "exhaustive", None
        note = f"exhaustive enumeration of {len(xs)}-tuples infeasible; sampled instead"
    elif mode == "sampled":
        note = None
    else:
        raise ValueError(f"unknown mode {mode!r}")
    rng = random.Random(seed)
    gen = (tuple(monad.random(x, rng) for x in xs) for _ in range(samples))
    return gen, "sampled", note


# ---------------------------------------------------------------- reports

@dataclass
class LawReport:
    name: str
    status: str
    instances: int = 0
    mode: str = "exhaustive"
    counterexample: dict | None = None
    note: str | None = None
    details: dict = field(default_factory=dict)
    subreports: list = field(default_factory=list)

    @property
    def passed(self):
        return self.status == "pass"

    def find(self, name):
        for r in self.subreports:
            if r.name == name:
                return r
        raise KeyError(name)

    @classmethod
    def combine(cls, name, subs, details=None, note=None):
        failed = [s for s in subs if s.status != "pass" and s.status != "skipped"]
        modes = {s.mode for s in subs}
        return cls(
            name=name,
            status=failed[0].status if failed else "pass",
            instances=sum(s.instances for s in subs),
            mode=modes.pop() if len(modes) == 1 else "mixed",
            counterexample=failed[0].counterexample if failed else None,
            note=note,
            details=details or {},
            subreports=list(subs),
        )

    def to_dict(self):
        d = {"name": self.name, "status": self.status, "instances": self.instances,
             "mode": self.mode}
        if self.counterexample is not None:
            d["counterexample"] = self.counterexample
        if self.note:
            d["note"] = self.note
        if self.details:
            d["details"] = self.details
        if self.subreports:
            d["subreports"] = [s.to_dict() for s in self.subreports]
        return d

    def lines(self, indent=0):
        pad = "  " * indent
        out = [f"{pad}{self.name}: {self.status.upper()} ({self.instances} instances, {self.mode})"]
        if self.note:
            out.append(f"{pad}  note: {self.note}")
        if self.counterexample is not None and not self.subreports:
            for k, v in self.counterexample.items():
                out.append(f"{pad}  {k}: {v}")
        for s in self.subreports:
            out.extend(s.lines(indent + 1))
        return out

    def __str__(self):
        return "\n".join(self.lines())


def run_law(name, cases, sides, mode="exhaustive", note=None, labels=None, details=None):
    """Evaluate ``sides(*case) -> (lhs, rhs)`` on every case; stop at the first mismatch."""
    count = 0
    for case in cases:
        if not isinstance(case, tuple):
            case = (case,)
        count += 1
        lhs, rhs = sides(*case)
        if lhs != rhs:
            names = labels or [f"arg{i}" for i in range(len(case))]
            witness = {n: _show(v) for n, v in zip(names, case)}
            witness["lhs"] = _show(lhs)
            witness["rhs"] = _show(rhs)
            return LawReport(name, "fail", count, mode, witness, note, details or {})
    return LawReport(name, "pass", count, mode, None, note, details or {})


def _show(v):
    if isinstance(v, (tuple, list)):
        return "(" + ", ".join(_show(x) for x in v) + ")"
    if isinstance(v, FinMap):
        return "[" + ",".join(v.codomain[t] for t in v.table) + "]"
    return str(v)


# ---------------------------------------------------------------- checks

def check_monad_laws(monad, x, mode="exhaustive", seed=DEFAULT_SEED, samples=DEFAULT_SAMPLES,
                     guard=DEFAULT_GUARD):
    """Both unit triangles and the associativity square of the monad at ``x``."""
    tx_cases, tx_mode, tx_note = instances(monad, x, 1, mode, seed, samples, guard)
    tx_cases = list(tx_cases)

    def left_unit(a):
        return monad.mult(monad.unit(carrier_of([a]), 0)), a

    def right_unit(a):
        return kleisli_bind(monad, a, lambda i: monad.unit(a.base, i)), a

    def assoc(m):
        # m is over a carrier of T^2 X elements, which are over a carrier of TX elements
        lhs = monad.mult(monad.mult(m))
        rhs = monad.mult(tmap(monad, monad.mult, m))
        return lhs, rhs

    t3_cases, t3_mode, t3_note = instances(monad, x, 3, mode, seed + 1, samples, guard)
    subs = [
        run_law("left_unit", tx_cases, left_unit, tx_mode, tx_note, ["a"]),
        run_law("right_unit", tx_cases, right_unit, tx_mode, tx_note, ["a"]),
        run_law("associativity", t3_cases, assoc, t3_mode, t3_note, ["m"]),
    ]
    details = {f"|T^{k}X|": tower_count(monad, x, k, guard) for k in (1, 2, 3)}
    return LawReport.combine(f"monad_laws[{monad.kind}, |X|={len(x)}]", subs, details)


def check_algebra_morphism(monad, h, x, z, mode="exhaustive", seed=DEFAULT_SEED,
                           samples=DEFAULT_SAMPLES, guard=DEFAULT_GUARD, name="algebra_morphism"):
    """``mult_Z o Th == h o mult_X`` on ``T^2 X`` for ``h: TX -> TZ``."""
    cases, eff, note = instances(monad, x, 2, mode, seed, samples, guard)

    def sides(m):
        return monad.mult(tmap(monad, h, m)), h(monad.mult(m))

    return run_law(name, cases, sides, eff, note, ["m"])


def check_free_determination(monad, h, x, z, mode="exhaustive", seed=DEFAULT_SEED,
                             samples=DEFAULT_SAMPLES, guard=DEFAULT_GUARD):
    """A free-algebra morphism ``h: TX -> TZ`` equals ``mult o T(h o unit)``.

    Runs the algebra-morphism check first; if that fails the determination
    check is not run and the report carries status ``precondition_failed``.
    """
    pre = check_algebra_morphism(monad, h, x, z, mode, seed, samples, guard)
    if not pre.passed:
        return LawReport("free_determination", "precondition_failed", 0, pre.mode,
                         pre.counterexample, "h is not a morphism of free algebras",
                         subreports=[pre])
    cases, eff, note = instances(monad, x, 1, mode, seed, samples, guard)

    def sides(a):
        return h(a), kleisli_bind(monad, a, lambda i: h(monad.unit(x, i)))

    main = run_law("free_determination", cases, sides, eff, note, ["a"])
    main.subreports = [pre]
    return main


def check_functor_laws(monad, x, y, z, mode="exhaustive", seed=DEFAULT_SEED,
                       samples=DEFAULT_SAMPLES, guard=DEFAULT_GUARD):
    """``T id = id`` and ``T(g o f) = Tg o Tf`` over all maps ``x->y->z``."""
    ident = identity(x)
    cases, eff, note = instances(monad, x, 1, mode, seed, samples, guard)
    cases = list(cases)
    id_law = run_law("fmap_identity", cases, lambda a: (monad.fmap(ident, a), a), eff, note, ["a"])

    fs = list(all_maps(x, y))
    gs = list(all_maps(y, z))
    if mode == "exhaustive" and len(fs) * len(gs) * len(cases) <= guard:
        triples = ((f, g, a) for f in fs for g in gs for a in cases)
        cmode, cnote = eff, note
    else:
        rng = random.Random(seed)
        triples = ((rng.choice(fs), rng.choice(gs), monad.random(x, rng)) for _ in range(samples))
        cmode, cnote = "sampled", note
    comp_law = run_law("fmap_composition", triples,
                       lambda f, g, a: (monad.fmap(compose(g, f), a), monad.fmap(g, monad.fmap(f, a))),
                       cmode, cnote, ["f", "g", "a"])
    return LawReport.combine(f"functor_laws[{monad.kind}]", [id_law, comp_law])


def check_unit_naturality(monad, x, y):
    """``Tf o unit = unit o f`` for every map ``f: x -> y``."""
    cases = ((f, i) for f in all_maps(x, y) for i in range(len(x)))
    return run_law(f"unit_naturality[{monad.kind}]", cases,
                   lambda f, i: (monad.fmap(f, monad.unit(x, i)), monad.unit(y, f(i))),
                   labels=["f", "x"])


def check_mult_naturality(monad, x, y, mode="exhaustive", seed=DEFAULT_SEED,
                          samples=DEFAULT_SAMPLES, guard=DEFAULT_GUARD):
    """``Tf o mult = mult o TTf`` on ``T^2 X`` for every map ``f: x -> y``."""
    ms, eff, note = instances(monad, x, 2, mode, seed, samples, guard)
    ms = list(ms)
    cases = ((f, m) for f in all_maps(x, y) for m in ms)

    def sides(f, m):
        return monad.fmap(f, monad.mult(m)), monad.mult(tmap(monad, lambda a: monad.fmap(f, a), m))

    return run_law(f"mult_naturality[{monad.kind}]", cases, sides, eff, note, ["f", "m"])


def require(condition, message):
    if not condition:
        raise PreconditionError(message)
