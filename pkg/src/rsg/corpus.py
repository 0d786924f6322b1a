"""Small finite restriction algebras used by the suites and tests."""
from __future__ import annotations

import itertools

from .algebra import FinRestrictionAlgebra
from .semidirect import FiniteAction, adjoin_identity_new, trivial_action


def diamond() -> FinRestrictionAlgebra:
    """{1, e, f, 0} with e, f incomparable."""
    meet = [[0, 1, 2, 3], [1, 1, 3, 3], [2, 3, 2, 3], [3, 3, 3, 3]]
    return FinRestrictionAlgebra.semilattice(meet, ["1", "e", "f", "0"])


def cyclic_group(n: int) -> FinRestrictionAlgebra:
    return FinRestrictionAlgebra.reduced_monoid([[(i + j) % n for j in range(n)] for i in range(n)], [f"g{i}" for i in range(n)])


def symmetric_inverse_monoid(n: int) -> FinRestrictionAlgebra:
    """Partial bijections of {0..n-1}, composed left to right; x+ and x* are
    the identities on the domain and on the range."""
    pts = range(n)
    elems = []
    for dom_size in range(n + 1):
        for dom in itertools.combinations(pts, dom_size):
            for img in itertools.permutations(pts, dom_size):
                elems.append(tuple(sorted(zip(dom, img))))
    idx = {e: i for i, e in enumerate(elems)}

    def comp(f, g):
        gd = dict(g)
        return tuple(sorted((x, gd[y]) for x, y in f if y in gd))

    def ident(s):
        return tuple((x, x) for x in sorted(s))

    mul = [[idx[comp(f, g)] for g in elems] for f in elems]
    plus = [idx[ident(x for x, _ in f)] for f in elems]
    star = [idx[ident(y for _, y in f)] for f in elems]
    names = ["{" + ",".join(f"{x}>{y}" for x, y in f) + "}" for f in elems]
    return FinRestrictionAlgebra(mul, plus, star, names)


def idempotent_monoid_action() -> FiniteAction:
    """The 2-chain with the monoid {1, z}, z² = z, acting trivially."""
    return FiniteAction([[0, 1], [1, 1]], [[0, 1], [1, 1]], [[0, 1], [0, 1]], ynames=["y", "y'"], tnames=["1", "z"])


def non_inverse_example() -> FinRestrictionAlgebra:
    """Y⋊T for the action above: a restriction semigroup that is not inverse."""
    return idempotent_monoid_action().semidirect()[0]


def completion_instances():
    """(name, FiniteAction, ρ generating pairs) fed to the factorisable completion."""
    z2 = [[0, 1], [1, 0]]
    swap = FiniteAction(
        [[0, 1, 2, 3], [1, 1, 3, 3], [2, 3, 2, 3], [3, 3, 3, 3]],
        z2,
        [[0, 1, 2, 3], [0, 2, 1, 3]],
        ynames=["1", "p", "q", "0"],
        tnames=["1", "s"],
    )
    return [
        ("trivial", trivial_action([[0]]), []),
        ("chain2-z2", trivial_action([[0, 1], [1, 1]], 2), []),
        ("chain2-idem", idempotent_monoid_action(), []),
        ("diamond-swap", swap, []),
        ("diamond-swap-glued", swap, [((1, 0), (2, 0))]),
        ("chain2-z2-collapsed", trivial_action([[0, 1], [1, 1]], 2), [((0, 0), (1, 0))]),
    ]


def completions():
    return [(name, adjoin_identity_new(act, pairs)) for name, act, pairs in completion_instances()]


def small_algebras() -> list[tuple[str, FinRestrictionAlgebra]]:
    """Every algebra here has at most 8 elements."""
    out = [
        ("trivial", FinRestrictionAlgebra.trivial()),
        ("chain2", FinRestrictionAlgebra.chain(2)),
        ("chain3", FinRestrictionAlgebra.chain(3)),
        ("chain4", FinRestrictionAlgebra.chain(4)),
        ("diamond", diamond()),
        ("z2", cyclic_group(2)),
        ("z3", cyclic_group(3)),
        ("I2", symmetric_inverse_monoid(2)),
        ("chain2-idem", non_inverse_example()),
    ]
    for name, c in completions():
        if c.F.n <= 8:
            out.append((f"completion-{name}", c.F))
    return out
