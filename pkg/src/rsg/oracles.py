"""Deliberately naive reference implementations.

Each function here computes the same thing as a fast routine elsewhere in
the package, by the most literal method available, so the two can be
compared on small inputs.
"""
from __future__ import annotations

import itertools
from typing import Iterable

from . import words as W
from .actions import Tree
from .algebra import Congruence, FinRestrictionAlgebra, UnionFind
from .words import AbelianElement, Alphabet


def span_geodesics(vs: Iterable[str]) -> frozenset[str]:
    """Union of all geodesics between pairs of given vertices."""
    vs = list(vs)
    out = set(vs)
    for g, h in itertools.product(vs, repeat=2):
        p = W.group_mul(W.invert(g), h)
        for k in range(len(p)):
            out.add(W.group_mul(g, p[:k]))
    return frozenset(out)


def span_pruning(vs: Iterable[str], alphabet: Alphabet) -> frozenset[str]:
    """Start from a ball containing everything, then strip leaves not in vs."""
    vs = set(vs)
    base = next(iter(vs))
    radius = max(len(W.group_mul(W.invert(base), v)) for v in vs)
    ball = {W.group_mul(base, w) for w in W.enumerate_reduced(alphabet, radius)}

    letters = alphabet.letters

    def nbrs(v):
        return [u for u in (W.group_mul(v, ch) for ch in letters) if u in ball]

    stack = [v for v in ball if v not in vs and len(nbrs(v)) <= 1]
    while stack:
        v = stack.pop()
        if v not in ball:
            continue
        ball.discard(v)
        stack.extend(u for u in nbrs(v) if u not in vs and len(nbrs(u)) <= 1)
    return frozenset(ball)


def meet_oracle(A: Tree, B: Tree) -> frozenset[str]:
    return span_geodesics(A.vertices | B.vertices)


def minclosed_oracle(vs: Iterable[AbelianElement]) -> frozenset[AbelianElement]:
    """Pairwise-minimum fixpoint."""
    cur = set(vs)
    while True:
        nxt = cur | {a.meet(b) for a in cur for b in cur}
        if nxt == cur:
            return frozenset(cur)
        cur = nxt


def congruence_oracle(S: FinRestrictionAlgebra, pairs) -> Congruence:
    """Grow a set of related pairs until reflexive, symmetric, transitive and
    closed under every one-step context."""
    n = S.n
    rel = {(i, i) for i in range(n)}
    for a, b in pairs:
        rel |= {(a, b), (b, a)}
    while True:
        nxt = set(rel)
        for a, b in rel:
            nxt.add((S.plus(a), S.plus(b)))
            nxt.add((S.star(a), S.star(b)))
            for c in range(n):
                nxt.add((S.mul(c, a), S.mul(c, b)))
                nxt.add((S.mul(a, c), S.mul(b, c)))
        for (a, b), (b2, c) in itertools.product(list(nxt), repeat=2):
            if b == b2:
                nxt.add((a, c))
        if nxt == rel:
            break
        rel = nxt
    uf = UnionFind(range(n))
    for a, b in rel:
        uf.union(a, b)
    return Congruence.from_union_find(n, uf)


def sigma_oracle(S: FinRestrictionAlgebra, a: int, b: int) -> bool:
    return any(S.mul(e, a) == S.mul(e, b) for e in {S.plus(x) for x in range(S.n)})


def natural_leq_oracle(S: FinRestrictionAlgebra, a: int, b: int) -> bool:
    """a = e·b for some projection e."""
    return any(S.mul(e, b) == a for e in {S.plus(x) for x in range(S.n)})
