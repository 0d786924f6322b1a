"""Semidirect products X⋊T and X⋊G over a nice action, the subalgebra R, and
the factorisable completion of a finite semidirect product."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, NamedTuple, Sequence

from .actions import FreeGroupTreeAction, NiceAction, Tree
from .algebra import (
    Congruence,
    FinRestrictionAlgebra,
    RestrictionAlgebra,
    UnionFind,
    finite_congruence_closure,
    quotient_finite,
)
from .errors import DomainError, InstanceError, ParseError
from . import words as W


class SDElement(NamedTuple):
    first: Any
    second: Any


class SemidirectProduct(RestrictionAlgebra):
    """X⋊T (``group=False``) or X⋊G (``group=True``) in the (a, t) form.

    (A, t)(B, u) = (A ∧ t·B, tu), (A, t)+ = (A, 1), (A, t)* = (t⁻¹·A, 1).
    """

    def __init__(self, action: NiceAction, group: bool = False):
        self.action = action
        self.group = group
        self.identity = SDElement(action.one, action.gid)

    def mul(self, x, y):
        act = self.action
        return SDElement(act.meet(x.first, act.act(x.second, y.first)), act.gmul(x.second, y.second))

    def plus(self, x):
        return SDElement(x.first, self.action.gid)

    def star(self, x):
        act = self.action
        return SDElement(act.act(act.ginv(x.second), x.first), act.gid)

    def sigma(self, x, y) -> bool:
        return x.second == y.second

    def leq(self, x, y) -> bool:
        return x.second == y.second and self.action.leq(x.first, y.first)

    def contains(self, x) -> bool:
        return self.group or self.action.in_monoid(x.second)

    def format(self, x) -> str:
        return format_sd(x, self.action)

    # R and the pulldown

    def in_R(self, x) -> bool:
        return in_R(self.action, x)

    def down(self, x):
        return down(self.action, x)


def _require_monoid(action: NiceAction, x) -> None:
    if not action.in_monoid(x.second):
        raise DomainError(f"second component {action.format_g(x.second)} is not in the monoid")


def in_R(action: NiceAction, x) -> bool:
    """A ∈ Y and A ≤ ā·𝟏."""
    _require_monoid(action, x)
    return action.in_Y(x.first) and action.leq(x.first, action.act(x.second, action.one))


def down(action: NiceAction, x) -> SDElement:
    """Greatest element of R below x: (𝟏 ∧ A ∧ ā·𝟏, ā)."""
    _require_monoid(action, x)
    one = action.one
    return SDElement(action.meet(action.meet(one, x.first), action.act(x.second, one)), x.second)


def format_sd(x, action: NiceAction | None = None) -> str:
    if action is None:
        return f"({x.first}, {W.format_word(x.second) if isinstance(x.second, str) else x.second})"
    return f"({action.format_x(x.first)}, {action.format_g(x.second)})"


def parse_sd(text: str, alphabet: W.Alphabet | None = None) -> SDElement:
    """Parse ``({ε,a,ab}, ab)`` for the free-group tree action."""
    s = text.strip()
    if not (s.startswith("(") and s.endswith(")")):
        raise ParseError("element literal must look like ({...}, w)", text, 0)
    body = s[1:-1]
    close = body.find("}")
    if close < 0:
        raise ParseError("missing closing brace", text, len(text) - 1)
    rest = body[close + 1:].strip()
    if not rest.startswith(","):
        raise ParseError("expected ',' after the tree", text, close + 2)
    return SDElement(Tree.parse(body[:close + 1], alphabet), W.parse_word(rest[1:], alphabet))


def free_semidirect(alphabet: W.Alphabet, group: bool = False) -> SemidirectProduct:
    return SemidirectProduct(FreeGroupTreeAction(alphabet), group=group)


# --- finite semidirect products and the factorisable completion -------------


class FiniteAction:
    """A finite monoid T acting on a finite semilattice Y by automorphisms.

    ``meet`` is Y's table, ``tmul`` is T's table with identity ``tid`` and
    ``act[t][y]`` is t·y.
    """

    def __init__(self, meet, tmul, act, tid: int | None = None, ynames=None, tnames=None):
        self.meet = [list(r) for r in meet]
        self.tmul = [list(r) for r in tmul]
        self.act = [list(r) for r in act]
        self.ny, self.nt = len(self.meet), len(self.tmul)
        if tid is None:
            tid = next((e for e in range(self.nt) if all(self.tmul[e][a] == a == self.tmul[a][e] for a in range(self.nt))), None)
            if tid is None:
                raise InstanceError("T has no identity element")
        self.tid = tid
        self.ynames = list(ynames) if ynames else [f"y{i}" for i in range(self.ny)]
        self.tnames = list(tnames) if tnames else [f"t{i}" for i in range(self.nt)]
        self._validate()
        self.inv = [[0] * self.ny for _ in range(self.nt)]
        for t in range(self.nt):
            for y in range(self.ny):
                self.inv[t][self.act[t][y]] = y

    def _validate(self):
        ny, nt, m = self.ny, self.nt, self.meet
        for a, b in itertools.product(range(ny), repeat=2):
            if m[a][b] != m[b][a] or m[a][a] != a:
                raise InstanceError("Y table is not a commutative idempotent operation")
        for a, b, c in itertools.product(range(ny), repeat=3):
            if m[m[a][b]][c] != m[a][m[b][c]]:
                raise InstanceError("Y table is not associative")
        for t, u, v in itertools.product(range(nt), repeat=3):
            if self.tmul[self.tmul[t][u]][v] != self.tmul[t][self.tmul[u][v]]:
                raise InstanceError("T table is not associative")
        for t in range(nt):
            row = self.act[t]
            if sorted(row) != list(range(ny)):
                raise InstanceError(f"action of {self.tnames[t]} is not a bijection of Y")
            for a, b in itertools.product(range(ny), repeat=2):
                if row[m[a][b]] != m[row[a]][row[b]]:
                    raise InstanceError(f"action of {self.tnames[t]} does not preserve meets")
        if self.act[self.tid] != list(range(ny)):
            raise InstanceError("identity of T does not act trivially")
        for t, u in itertools.product(range(nt), repeat=2):
            tu = self.tmul[t][u]
            if any(self.act[tu][y] != self.act[t][self.act[u][y]] for y in range(ny)):
                raise InstanceError("action is not a monoid action")

    def semidirect(self) -> tuple[FinRestrictionAlgebra, list[tuple[int, int]]]:
        """Tabulate Y⋊T; element k encodes (y, t) with k = y * nt + t."""
        ny, nt = self.ny, self.nt
        pairs = [(y, t) for y in range(ny) for t in range(nt)]
        enc = {p: k for k, p in enumerate(pairs)}
        mul = [[enc[(self.meet[y][self.act[t][z]], self.tmul[t][u])] for (z, u) in pairs] for (y, t) in pairs]
        plus = [enc[(y, self.tid)] for (y, t) in pairs]
        star = [enc[(self.inv[t][y], self.tid)] for (y, t) in pairs]
        names = [f"({self.ynames[y]},{self.tnames[t]})" for (y, t) in pairs]
        return FinRestrictionAlgebra(mul, plus, star, names), pairs

    def adjoin_top(self) -> "FiniteAction":
        """Y^e: a new top e (last index) fixed by every t."""
        ny = self.ny
        e = ny
        meet = [row[:] + [i] for i, row in enumerate(self.meet)] + [list(range(ny)) + [e]]
        act = [row[:] + [e] for row in self.act]
        return FiniteAction(meet, self.tmul, act, self.tid, self.ynames + ["e"], self.tnames)


@dataclass
class Completion:
    """Output of :func:`adjoin_identity_new`."""

    old: FinRestrictionAlgebra  # F⁻ = (Y⋊T)/ρ
    F: FinRestrictionAlgebra  # (Y^e⋊T)/ρ_e
    embedding: list[int]  # block of F⁻ -> block of F
    units: list[int]  # blocks of F holding the (e, t)
    rho: Congruence
    rho_e: Congruence


def adjoin_identity_new(action: FiniteAction, rho_pairs: Sequence[tuple[tuple[int, int], tuple[int, int]]] = ()) -> Completion:
    """Factorisable completion of F⁻ = (Y⋊T)/ρ.

    ``rho_pairs`` are pairs of (y, t) index pairs generating ρ on Y⋊T.  ρ_e is
    ρ together with equality on U = {(e, t)}; it is checked to be a
    congruence by forming the quotient.
    """
    base, pairs = action.semidirect()
    enc = {p: k for k, p in enumerate(pairs)}
    try:
        gen = [(enc[tuple(a)], enc[tuple(b)]) for a, b in rho_pairs]
    except KeyError as exc:
        raise InstanceError(f"pair component {exc} is not an element of Y⋊T") from None
    rho = finite_congruence_closure(base, gen)
    old = quotient_finite(base, rho)

    ext = action.adjoin_top()
    big, big_pairs = ext.semidirect()
    big_enc = {p: k for k, p in enumerate(big_pairs)}
    uf = UnionFind(range(big.n))
    for block in rho.blocks:
        for k in block[1:]:
            uf.union(big_enc[pairs[block[0]]], big_enc[pairs[k]])
    rho_e = Congruence.from_union_find(big.n, uf)
    F = quotient_finite(big, rho_e)

    embedding = [rho_e.block_of(big_enc[pairs[b[0]]]) for b in rho.blocks]
    e = ext.ny - 1
    units = sorted({rho_e.block_of(big_enc[(e, t)]) for t in range(action.nt)})
    return Completion(old, F, embedding, units, rho, rho_e)


def trivial_action(meet, nt: int = 1, tmul=None, tnames=None, ynames=None) -> FiniteAction:
    """T acting trivially on Y; T defaults to the trivial monoid."""
    if tmul is None:
        tmul = [[0]] if nt == 1 else [[(i + j) % nt for j in range(nt)] for i in range(nt)]
    ny = len(meet)
    return FiniteAction(meet, tmul, [list(range(ny)) for _ in range(len(tmul))], ynames=ynames, tnames=tnames)
