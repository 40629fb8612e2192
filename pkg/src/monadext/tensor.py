"""Tensor product ``TX x TY -> T(X x Y)`` and its unit, naturality and
associativity laws."""
from __future__ import annotations

from fractions import Fraction

from .core import (DEFAULT_GUARD, DEFAULT_SAMPLES, DEFAULT_SEED, LawReport, TElement,
                   kleisli_bind, pair_instances, run_law)
from .finset import bits, map_product, pair_injection, product, reassociate


def tensor(monad, a, b):
    """``a (x) b``: bind ``a`` along ``x |-> T(y |-> (x,y))(b)``."""
    x, y = a.base, b.base
    injections = [pair_injection(x, y, i) for i in range(len(x))]
    return kleisli_bind(monad, a, lambda i: monad.fmap(injections[i], b))


def oracle_tensor_exp(a, b):
    """Cartesian product of two subsets."""
    ny = len(b.base)
    mask = 0
    for i in bits(a.payload):
        for j in bits(b.payload):
            mask |= 1 << (i * ny + j)
    return TElement("exp", product(a.base, b.base), mask)


def oracle_tensor_prob(a, b):
    """Product measure."""
    ny = len(b.base)
    pairs = sorted((i * ny + j, Fraction(v) * w) for i, v in a.payload for j, w in b.payload)
    return TElement("prob", product(a.base, b.base), tuple(pairs))


def check_tensor_unit(monad, x, y):
    """``unit(x) (x) unit(y) == unit((x,y))`` for all points."""
    xy = product(x, y)
    cases = ((i, j) for i in range(len(x)) for j in range(len(y)))
    return run_law(f"tensor_unit[{monad.kind}]", cases,
                   lambda i, j: (tensor(monad, monad.unit(x, i), monad.unit(y, j)),
                                 monad.unit(xy, i * len(y) + j)),
                   labels=["x", "y"])


def check_tensor_naturality(monad, h_x, h_y, mode="exhaustive", seed=DEFAULT_SEED,
                            samples=DEFAULT_SAMPLES, guard=DEFAULT_GUARD):
    """``T(h_X x h_Y)(a (x) b) == T h_X(a) (x) T h_Y(b)``."""
    hxy = map_product(h_x, h_y)
    cases, eff, note = pair_instances(monad, [h_x.domain, h_y.domain], mode, seed, samples, guard)

    def sides(a, b):
        return (monad.fmap(hxy, tensor(monad, a, b)),
                tensor(monad, monad.fmap(h_x, a), monad.fmap(h_y, b)))

    return run_law(f"tensor_naturality[{monad.kind}]", cases, sides, eff, note, ["a", "b"])


def check_tensor_associativity(monad, x, y, z, mode="exhaustive", seed=DEFAULT_SEED,
                               samples=DEFAULT_SAMPLES, guard=DEFAULT_GUARD):
    """``(a (x) b) (x) c == a (x) (b (x) c)`` modulo the reassociation bijection."""
    flat = reassociate(x, y, z)
    cases, eff, note = pair_instances(monad, [x, y, z], mode, seed, samples, guard)

    def sides(a, b, c):
        lhs = monad.fmap(flat, tensor(monad, tensor(monad, a, b), c))
        return lhs, tensor(monad, a, tensor(monad, b, c))

    return run_law(f"tensor_associativity[{monad.kind}]", cases, sides, eff, note,
                   ["a", "b", "c"])


def check_tensor_oracle(monad, x, y, mode="exhaustive", seed=DEFAULT_SEED,
                        samples=DEFAULT_SAMPLES, guard=DEFAULT_GUARD):
    """Agreement with the Cartesian product (exp) or product measure (prob)."""
    oracle = {"exp": oracle_tensor_exp, "prob": oracle_tensor_prob}.get(monad.kind)
    if oracle is None:
        return LawReport(f"tensor_oracle[{monad.kind}]", "skipped", 0, mode,
                         note="no independent oracle for this monad")
    cases, eff, note = pair_instances(monad, [x, y], mode, seed, samples, guard)
    return run_law(f"tensor_oracle[{monad.kind}]", cases,
                   lambda a, b: (tensor(monad, a, b), oracle(a, b)), eff, note, ["a", "b"])
