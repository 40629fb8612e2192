"""The concrete monads: identity (beta on finite discrete sets), the
hyperspace ``exp``, the superextension ``lambda``, inclusion hyperspaces
``incl`` (G) and finitely supported probability measures ``prob``.

Payloads:

=======  ==============================================================
id       atom index
exp      nonempty subset bitmask
incl     sorted tuple of bitmasks: the minimal members of an up-family
lambda   same as incl, for a maximal linked system
prob     sorted tuple of ``(index, Fraction)`` with positive weights
=======  ==============================================================

Rendering: points are bare labels, subsets ``{a,b}``, families list their
minimal members ``[{a},{b,c}]`` and distributions ``{a:1/2, b:1/2}``.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache

from .core import MONADS, Monad
from .errors import CapabilityError, ParseError, ResourceGuardError, ValidationError
from .finset import FinMap, bits, canonical_set, popcount

FAMILY_BOUND = 4
EXP_BOUND = 20


def split_top(text, sep=","):
    """Split on ``sep`` outside of any (), {} or [] nesting."""
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch in "({[":
            depth += 1
        elif ch in ")}]":
            depth -= 1
            if depth < 0:
                raise ParseError(f"unbalanced brackets in {text!r}")
        elif ch == sep and depth == 0:
            parts.append(text[start:i])
            start = i + 1
    if depth != 0:
        raise ParseError(f"unbalanced brackets in {text!r}")
    parts.append(text[start:])
    return parts


def _unwrap(text, opening, closing):
    text = text.strip()
    if len(text) < 2 or text[0] != opening or text[-1] != closing:
        raise ParseError(f"expected {opening}...{closing}, got {text!r}")
    inner = text[1:-1]
    # the brackets must enclose the whole text, not e.g. "{a},{b}"
    split_top(inner)
    return inner


def _atom(base, label):
    label = label.strip()
    try:
        return base.index(label)
    except KeyError:
        raise ParseError(f"unknown atom {label!r}") from None


def _parse_mask(base, text):
    inner = _unwrap(text, "{", "}")
    if not inner.strip():
        return 0
    mask = 0
    for part in split_top(inner):
        i = _atom(base, part)
        if mask >> i & 1:
            raise ParseError(f"repeated atom in {text!r}")
        mask |= 1 << i
    return mask


def minimize(masks):
    """Minimal elements of a collection of bitmasks, sorted ascending."""
    ms = sorted(set(masks), key=lambda m: (popcount(m), m))
    out = []
    for m in ms:
        if not any(k & m == k for k in out):
            out.append(m)
    return tuple(sorted(out))


def family_contains(family, mask):
    return any(m & mask == m for m in family)


VECTOR_BOUND = 6


@lru_cache(maxsize=1 << 16)
def upset_vector(family, n):
    """The up-closure of ``family`` as a ``2**n``-bit characteristic vector."""
    vec = 0
    for a in range(1 << n):
        if family_contains(family, a):
            vec |= 1 << a
    return vec


def minimal_from_vector(vec, n):
    out = []
    a = vec
    while a:
        low = a & -a
        s = low.bit_length() - 1
        a ^= low
        if not any(vec >> (s ^ (1 << i)) & 1 for i in bits(s)):
            out.append(s)
    return tuple(sorted(out))


def meet(f, g):
    """Intersection of two up-families, as minimal members."""
    return minimize(a | b for a in f for b in g)


class Identity(Monad):
    """``beta`` at finite scale: ``beta X = X`` and mult is the identity."""

    kind = "id"

    def unit(self, base, i):
        return self.elem(base, i)

    def _fmap(self, f, a):
        return self.elem(f.codomain, f.table[a.payload])

    def mult(self, m):
        return self.members_of(m)[m.payload]

    def support_mask(self, a):
        return 1 << a.payload

    def count(self, n):
        return n

    def elements(self, base):
        return [self.elem(base, i) for i in range(len(base))]

    def validate(self, a):
        if not isinstance(a.payload, int) or not 0 <= a.payload < len(a.base):
            raise ValidationError(f"point index {a.payload!r} out of range")

    def random(self, base, rng):
        return self.elem(base, rng.randrange(len(base)))

    def render(self, a):
        return a.base[a.payload]

    def parse(self, base, text):
        return self.elem(base, _atom(base, text))


class Exp(Monad):
    """Nonempty subsets; unit is the singleton, mult the union."""

    kind = "exp"

    def unit(self, base, i):
        return self.elem(base, 1 << i)

    def subset(self, base, indices):
        mask = 0
        for i in indices:
            mask |= 1 << i
        return self.elem(base, mask)

    def _fmap(self, f, a):
        return self.elem(f.codomain, f.image_mask(a.payload))

    def mult(self, m):
        members = self.members_of(m)
        out = 0
        for i in bits(m.payload):
            out |= members[i].payload
        return self.elem(members[0].base, out)

    def support_mask(self, a):
        return a.payload

    def count(self, n):
        if n > EXP_BOUND:
            return None
        return (1 << n) - 1

    def elements(self, base):
        if self.count(len(base)) is None:
            raise ResourceGuardError(f"exp over {len(base)} points exceeds the bound {EXP_BOUND}")
        return [self.elem(base, m) for m in range(1, 1 << len(base))]

    def validate(self, a):
        p = a.payload
        if not isinstance(p, int) or p <= 0 or p >> len(a.base):
            raise ValidationError(f"{p!r} is not a nonempty subset mask")

    def random(self, base, rng):
        return self.elem(base, rng.randrange(1, 1 << len(base)))

    def render(self, a):
        return a.base.render_subset(a.payload)

    def parse(self, base, text):
        mask = _parse_mask(base, text)
        if not mask:
            raise ParseError("the empty set is not an element of exp X")
        return self.elem(base, mask)


class UpFamilies(Monad):
    """Up-closed families of nonempty subsets, stored as minimal antichains.

    ``mult(M) = {A : A+ in M}`` with ``A+ = {F : A in F}``.  The code uses
    the equivalent union-of-intersections form: ``A+`` lies in ``M`` exactly
    when ``A`` belongs to every family of some minimal member of ``M``.
    """

    def unit(self, base, i):
        return self.elem(base, (1 << i,))

    def _fmap(self, f, a):
        return self.elem(f.codomain, minimize(f.image_mask(m) for m in a.payload))

    def mult(self, m):
        members = self.members_of(m)
        n = len(members[0].base)
        if n <= VECTOR_BOUND:
            vec = 0
            for block in m.payload:
                acc = -1
                for i in bits(block):
                    acc &= upset_vector(members[i].payload, n)
                vec |= acc
            return self.elem(members[0].base, minimal_from_vector(vec, n))
        out = []
        for block in m.payload:
            fams = [members[i].payload for i in bits(block)]
            acc = fams[0]
            for g in fams[1:]:
                acc = meet(acc, g)
            out.extend(acc)
        return self.elem(members[0].base, minimize(out))

    def mult_by_plus(self, m):
        """``mult`` straight from the ``A+`` definition, over all subsets A."""
        members = self.members_of(m)
        base = members[0].base
        found = []
        for a in range(1, 1 << len(base)):
            plus = 0
            for k, fam in enumerate(members):
                if family_contains(fam.payload, a):
                    plus |= 1 << k
            if family_contains(m.payload, plus):
                found.append(a)
        return self.elem(base, minimize(found))

    def support_mask(self, a):
        out = 0
        for m in a.payload:
            out |= m
        return out

    def count(self, n):
        if n > FAMILY_BOUND:
            return None
        return len(self._enumerate(n))

    def elements(self, base):
        if len(base) > FAMILY_BOUND:
            raise ResourceGuardError(
                f"{self.kind} over {len(base)} points exceeds the bound {FAMILY_BOUND}")
        return [self.elem(base, p) for p in self._enumerate(len(base))]

    def _check_family(self, a):
        p = a.payload
        n = len(a.base)
        if not isinstance(p, tuple) or not p:
            raise ValidationError("family must be a nonempty tuple of masks")
        for m in p:
            if not isinstance(m, int) or m <= 0 or m >> n:
                raise ValidationError(f"{m!r} is not a nonempty subset mask")
        if minimize(p) != p:
            raise ValidationError("family is not a sorted antichain")

    def render(self, a):
        return "[" + ",".join(a.base.render_subset(m) for m in a.payload) + "]"

    def parse(self, base, text):
        inner = _unwrap(text, "[", "]")
        if not inner.strip():
            raise ParseError("empty family")
        masks = [_parse_mask(base, part) for part in split_top(inner)]
        if any(m == 0 for m in masks):
            raise ParseError("families may not contain the empty set")
        payload = tuple(sorted(masks))
        if minimize(payload) != payload:
            raise ParseError(f"{text!r} does not list an antichain of minimal members")
        a = self.elem(base, payload)
        try:
            self.validate(a)
        except ValidationError as e:
            raise ParseError(str(e)) from None
        return a


@lru_cache(maxsize=None)
def antichains(n):
    """All nonempty antichains of nonempty subsets of an n-set, sorted."""
    subsets = list(range(1, 1 << n))
    out = []

    def grow(start, chosen):
        if chosen:
            out.append(tuple(sorted(chosen)))
        for k in range(start, len(subsets)):
            s = subsets[k]
            if all(s & c != c and s & c != s for c in chosen):
                chosen.append(s)
                grow(k + 1, chosen)
                chosen.pop()

    grow(0, [])
    out.sort()
    return tuple(out)


def is_linked(family):
    return all(a & b for a, b in itertools.combinations_with_replacement(family, 2))


def is_maximal_linked(family, n):
    """Linked, and every set meeting all members already belongs."""
    if not is_linked(family):
        return False
    for a in range(1, 1 << n):
        if all(a & m for m in family) and not family_contains(family, a):
            return False
    return True


class Incl(UpFamilies):
    kind = "incl"

    def _enumerate(self, n):
        return antichains(n)

    def validate(self, a):
        self._check_family(a)

    def random(self, base, rng):
        n = len(base)
        k = rng.randint(1, 3)
        return self.elem(base, minimize(rng.randrange(1, 1 << n) for _ in range(k)))


@lru_cache(maxsize=None)
def maximal_linked_systems(n):
    return tuple(f for f in antichains(n) if is_maximal_linked(f, n))


class Superextension(UpFamilies):
    kind = "lambda"

    def _enumerate(self, n):
        return maximal_linked_systems(n)

    def validate(self, a):
        self._check_family(a)
        if not is_maximal_linked(a.payload, len(a.base)):
            raise ValidationError("family is not a maximal linked system")

    def random(self, base, rng):
        # uniform when the carrier is small enough to enumerate, otherwise
        # the image of a random system on a small set under a random map
        n = len(base)
        if n <= FAMILY_BOUND:
            return self.elem(base, rng.choice(maximal_linked_systems(n)))
        d = rng.randint(1, FAMILY_BOUND)
        f = FinMap(canonical_set(d), base, [rng.randrange(n) for _ in range(d)])
        src = self.elem(f.domain, rng.choice(maximal_linked_systems(d)))
        return self._fmap(f, src)


def _frac(text):
    try:
        w = Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad weight {text!r}") from None
    return w


def _show_frac(w):
    return str(w.numerator) if w.denominator == 1 else f"{w.numerator}/{w.denominator}"


class Prob(Monad):
    """Finitely supported probability measures with exact rational weights."""

    kind = "prob"
    enumerable = False

    def unit(self, base, i):
        return self.elem(base, ((i, Fraction(1)),))

    def dist(self, base, weights):
        """Build from a mapping or pair list ``index -> weight`` (zeros dropped)."""
        items = weights.items() if isinstance(weights, dict) else weights
        acc = {}
        for i, w in items:
            acc[i] = acc.get(i, 0) + Fraction(w)
        a = self.elem(base, tuple(sorted((i, w) for i, w in acc.items() if w != 0)))
        self.validate(a)
        return a

    def uniform(self, base, indices=None):
        idx = list(range(len(base)) if indices is None else indices)
        return self.dist(base, {i: Fraction(1, len(idx)) for i in idx})

    def _fmap(self, f, a):
        acc = {}
        t = f.table
        for i, w in a.payload:
            j = t[i]
            acc[j] = acc.get(j, 0) + w
        return self.elem(f.codomain, tuple(sorted(acc.items())))

    def mult(self, m):
        members = self.members_of(m)
        acc = {}
        for k, w in m.payload:
            for i, v in members[k].payload:
                acc[i] = acc.get(i, 0) + w * v
        return self.elem(members[0].base, tuple(sorted(acc.items())))

    def support_mask(self, a):
        out = 0
        for i, _ in a.payload:
            out |= 1 << i
        return out

    def validate(self, a):
        p = a.payload
        n = len(a.base)
        if not isinstance(p, tuple) or not p:
            raise ValidationError("distribution needs a nonempty support")
        idx = [i for i, _ in p]
        if idx != sorted(set(idx)) or not all(0 <= i < n for i in idx):
            raise ValidationError("support indices must be distinct, sorted and in range")
        if not all(isinstance(w, Fraction) and w > 0 for _, w in p):
            raise ValidationError("weights must be positive Fractions")
        if sum(w for _, w in p) != 1:
            raise ValidationError(f"weights sum to {sum(w for _, w in p)}, not 1")

    def random(self, base, rng):
        n = len(base)
        k = rng.randint(1, min(n, 4))
        idx = rng.sample(range(n), k)
        raw = [rng.randint(1, 9) for _ in idx]
        total = sum(raw)
        return self.elem(base, tuple(sorted((i, Fraction(r, total)) for i, r in zip(idx, raw))))

    def elements(self, base):
        raise CapabilityError("prob: P X is infinite and is never enumerated")

    def render(self, a):
        return "{" + ", ".join(f"{a.base[i]}:{_show_frac(w)}" for i, w in a.payload) + "}"

    def parse(self, base, text):
        inner = _unwrap(text, "{", "}")
        pairs = []
        for part in split_top(inner):
            cut = split_top(part, ":")
            if len(cut) < 2:
                raise ParseError(f"expected label:weight, got {part!r}")
            label = ":".join(cut[:-1])
            pairs.append((_atom(base, label), _frac(cut[-1])))
        if len({i for i, _ in pairs}) != len(pairs):
            raise ParseError(f"repeated atom in {text!r}")
        a = self.elem(base, tuple(sorted(pairs)))
        try:
            self.validate(a)
        except ValidationError as e:
            raise ParseError(str(e)) from None
        return a


IDENTITY = Identity()
EXP = Exp()
LAMBDA = Superextension()
INCL = Incl()
PROB = Prob()

for _m in (IDENTITY, EXP, LAMBDA, INCL, PROB):
    MONADS[_m.kind] = _m

ENUMERABLE_KINDS = ("id", "exp", "lambda", "incl")


def support(monad, a, brute_force_limit=12):
    """Least ``A`` with ``a`` in the image of ``T(A -> X)``, as a sub-carrier mask.

    Subsets are tried by increasing size.  ``a`` lies in the image of the
    inclusion ``i`` exactly when ``Ti(Tr(a)) == a`` for a retraction ``r``
    onto ``A``, so no enumeration of ``TA`` is needed.  Above
    ``brute_force_limit`` points the monad's direct support rule is used.
    """
    n = len(a.base)
    if n > brute_force_limit:
        return monad.support_mask(a)
    for size in range(1, n + 1):
        for combo in itertools.combinations(range(n), size):
            mask = 0
            for i in combo:
                mask |= 1 << i
            if in_image(monad, a, mask):
                return mask
    raise AssertionError("an element always lies in the image of the identity")


def inclusion(base, mask):
    sub = base.subset(mask)
    return FinMap(sub, base, list(bits(mask)))


def retraction(base, mask):
    """A map ``X -> A`` fixing ``A``; points outside go to the first atom of ``A``."""
    sub = base.subset(mask)
    pos = {i: k for k, i in enumerate(bits(mask))}
    return FinMap(base, sub, [pos.get(i, 0) for i in range(len(base))])


def restrict(monad, a, mask):
    """The preimage of ``a`` in ``T(A)``; ``mask`` must contain the support."""
    return monad.fmap(retraction(a.base, mask), a)


def in_image(monad, a, mask):
    r = restrict(monad, a, mask)
    return monad.fmap(inclusion(a.base, mask), r) == a


def upfamily_associativity_certificate(monad, x, guard=10**6):
    """Exhaustive associativity for an up-family monad without listing ``T^3 X``.

    Every ``M`` in ``T^3 X`` is an up-family on ``T^2 X``.  For a subset
    ``A`` of ``X``: ``A`` lies in ``mult(mult(M))`` iff the set
    ``{F in T^2 X : A+ in F}`` belongs to ``M``, and ``A`` lies in
    ``mult(T mult(M))`` iff ``{F in T^2 X : A in mult(F)}`` belongs to
    ``M``.  The two sides agree on every ``M`` exactly when those two
    subsets of ``T^2 X`` coincide for every ``A``; this checks that.
    Returns ``(ok, witness_subset_or_None, |T^2 X|)``.
    """
    from .core import tower

    tx = tower(monad, x, 1, guard)
    t2x = tower(monad, x, 2, guard)
    n = len(x)
    for a in range(1, 1 << n):
        plus = 0
        for k, fam in enumerate(tx.members):
            if family_contains(fam.payload, a):
                plus |= 1 << k
        lhs = 0
        rhs = 0
        for k, big in enumerate(t2x.members):
            if family_contains(big.payload, plus):
                lhs |= 1 << k
            if family_contains(monad.mult(big).payload, a):
                rhs |= 1 << k
        if lhs != rhs:
            return False, x.render_subset(a), len(t2x)
    return True, None, len(t2x)
