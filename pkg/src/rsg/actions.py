"""Semilattices acted on by a group, and the nice-factorization check.

Two built-in instances:

* :class:`FreeGroupTreeAction` -- finite subtrees of the Cayley graph of the
  free group, ordered by reverse inclusion, meet = spanned union, with the
  free monoid as the acting monoid.
* :class:`FreeAbelianAction` -- finite nonempty min-closed subsets of the free
  abelian group, with the free commutative monoid acting.
"""
from __future__ import annotations

from typing import Iterable, Iterator

from . import words as W
from .errors import DomainError, FactorizationError, ParseError
from .words import AbelianElement, Alphabet


class Tree:
    """A finite subtree of the Cayley graph of a free group.

    Stored as the frozenset of its vertices (reduced words).  Use
    :func:`span` or :meth:`parse` to build one from arbitrary vertices; the
    bare constructor trusts its input and is meant for internal use.
    """

    __slots__ = ("vertices", "_hash")

    def __init__(self, vertices: frozenset):
        self.vertices = vertices
        self._hash = hash(vertices)

    def __eq__(self, other) -> bool:
        return isinstance(other, Tree) and self.vertices == other.vertices

    def __hash__(self) -> int:
        return self._hash

    def __len__(self) -> int:
        return len(self.vertices)

    def __contains__(self, v: str) -> bool:
        return v in self.vertices

    def __iter__(self):
        return iter(self.sorted_vertices())

    def __lt__(self, other: "Tree") -> bool:
        return self.sort_key() < other.sort_key()

    def sorted_vertices(self) -> list[str]:
        return sorted(self.vertices, key=lambda w: (len(w), w))

    def sort_key(self):
        return (len(self.vertices), self.sorted_vertices())

    def __str__(self) -> str:
        return "{" + ",".join(W.format_word(v) for v in self.sorted_vertices()) + "}"

    __repr__ = __str__

    @classmethod
    def parse(cls, text: str, alphabet: Alphabet | None = None) -> "Tree":
        s = text.strip()
        if not (s.startswith("{") and s.endswith("}")):
            raise ParseError("tree literal must be enclosed in braces", text, 0)
        body = s[1:-1].strip()
        if not body:
            raise ParseError("tree literal is empty", text, 1)
        return span(W.parse_word(tok, alphabet) for tok in body.split(","))

    def to_dot(self, name: str = "tree") -> str:
        lines = [f"digraph {name} {{"]
        for v in self.sorted_vertices():
            lines.append(f'  "{W.format_word(v)}";')
        for v in self.sorted_vertices():
            for ch in sorted({c.lower() for c in "".join(self.vertices)} or ()):
                w = W.group_mul(v, ch)
                if w in self.vertices:
                    lines.append(f'  "{W.format_word(v)}" -> "{W.format_word(w)}" [label="{ch}"];')
        lines.append("}")
        return "\n".join(lines)


ONE = Tree(frozenset([""]))


def _path(g: str, h: str) -> list[str]:
    """Vertices on the geodesic from g to h in the Cayley tree."""
    p = W.group_mul(W.invert(g), h)
    return [W.group_mul(g, p[:k]) for k in range(len(p) + 1)]


def span(vs: Iterable[str]) -> Tree:
    """Smallest subtree containing the given vertices.

    In a tree the union of geodesics from one fixed vertex to all the others
    is already connected and minimal.
    """
    vs = list(vs)
    if not vs:
        raise DomainError("cannot span an empty vertex set")
    base = vs[0]
    inv_base = W.invert(base)
    out = set()
    for s in vs:
        p = W.group_mul(inv_base, s)
        for k in range(len(p) + 1):
            out.add(W.group_mul(base, p[:k]))
    return Tree(frozenset(out))


def tree_meet(A: Tree, B: Tree) -> Tree:
    va, vb = A.vertices, B.vertices
    if va <= vb:
        return B
    if vb <= va:
        return A
    union = va | vb
    if va.isdisjoint(vb):
        # any geodesic between the two subtrees crosses the unique bridge
        a, b = next(iter(va)), next(iter(vb))
        union = union.union(_path(a, b))
    return Tree(union)


def tree_act(g: str, A: Tree) -> Tree:
    if not g:
        return A
    return Tree(frozenset(W.group_mul(g, v) for v in A.vertices))


def tree_leq(A: Tree, B: Tree) -> bool:
    return A.vertices >= B.vertices


def in_ideal_Y(A: Tree) -> bool:
    return "" in A.vertices


def neighbours(v: str, alphabet: Alphabet) -> list[str]:
    return [W.group_mul(v, ch) for ch in alphabet.letters]


def boundary(A: Tree, alphabet: Alphabet) -> set[str]:
    out = set()
    for v in A.vertices:
        for w in neighbours(v, alphabet):
            if w not in A.vertices:
                out.add(w)
    return out


def enumerate_subtrees(alphabet: Alphabet, max_size: int, root: str = "") -> list[Tree]:
    """All subtrees containing ``root`` with at most ``max_size`` vertices."""
    level = {frozenset([root])}
    out = [Tree(f) for f in level]
    for _ in range(max_size - 1):
        nxt = set()
        for vs in level:
            for v in vs:
                for w in neighbours(v, alphabet):
                    if w not in vs:
                        nxt.add(vs | {w})
        out.extend(Tree(f) for f in nxt)
        level = nxt
    return out


# --- min-closed sets ------------------------------------------------------------


class MinClosedSet:
    __slots__ = ("elements", "_hash")

    def __init__(self, elements: frozenset):
        self.elements = elements
        self._hash = hash(elements)

    def __eq__(self, other) -> bool:
        return isinstance(other, MinClosedSet) and self.elements == other.elements

    def __hash__(self) -> int:
        return self._hash

    def __len__(self) -> int:
        return len(self.elements)

    def __str__(self) -> str:
        return "{" + ", ".join(str(g) for g in sorted(self.elements)) + "}"

    __repr__ = __str__


def minclosed_span(vs: Iterable[AbelianElement]) -> MinClosedSet:
    """Close under coordinatewise minimum.

    Adding one generator v to a closed set C gives C + {v} + {min(v, c)}; the
    result is closed again because min is associative and idempotent.
    """
    closed: set[AbelianElement] = set()
    any_input = False
    for v in vs:
        any_input = True
        if v in closed:
            continue
        closed |= {v.meet(c) for c in closed}
        closed.add(v)
    if not any_input:
        raise DomainError("cannot span an empty set")
    return MinClosedSet(frozenset(closed))


# --- the nice-action interface --------------------------------------------------


class NiceAction:
    """A group G acting on a semilattice X, with T a generating submonoid.

    Subclasses provide the semilattice (``one``, ``meet``, ``leq``), the group
    (``gmul``, ``ginv``, ``gid``), monoid membership and a factorization of
    group elements into alternating blocks from T and T^-1.
    """

    one = None
    gid = None

    def meet(self, x, y):
        raise NotImplementedError

    def leq(self, x, y) -> bool:
        raise NotImplementedError

    def act(self, g, x):
        raise NotImplementedError

    def gmul(self, g, h):
        raise NotImplementedError

    def ginv(self, g):
        raise NotImplementedError

    def in_monoid(self, g) -> bool:
        raise NotImplementedError

    def factorize(self, g) -> list:
        raise NotImplementedError

    def in_Y(self, x) -> bool:
        return self.leq(x, self.one)

    def format_x(self, x) -> str:
        return str(x)

    def format_g(self, g) -> str:
        return str(g)


class FreeGroupTreeAction(NiceAction):
    """FG(Omega) acting on Cayley subtrees by left translation."""

    def __init__(self, alphabet: Alphabet):
        self.alphabet = alphabet
        self.one = ONE
        self.gid = ""

    meet = staticmethod(tree_meet)
    leq = staticmethod(tree_leq)
    act = staticmethod(tree_act)
    gmul = staticmethod(W.group_mul)
    ginv = staticmethod(W.invert)
    in_monoid = staticmethod(W.is_positive)
    factorize = staticmethod(W.nice_factorization_free)

    def in_Y(self, x: Tree) -> bool:
        return "" in x.vertices

    def format_g(self, g: str) -> str:
        return W.format_word(g)

    def parse_x(self, text: str) -> Tree:
        return Tree.parse(text, self.alphabet)

    def parse_g(self, text: str) -> str:
        return W.parse_word(text, self.alphabet)

    def __repr__(self):
        return f"FreeGroupTreeAction({''.join(self.alphabet.symbols)!r})"


class FreeAbelianAction(NiceAction):
    """The free abelian group acting on min-closed sets by translation."""

    def __init__(self, alphabet: Alphabet):
        self.alphabet = alphabet
        self.gid = AbelianElement()
        self.one = MinClosedSet(frozenset([self.gid]))

    def meet(self, x: MinClosedSet, y: MinClosedSet) -> MinClosedSet:
        if x.elements <= y.elements:
            return y
        if y.elements <= x.elements:
            return x
        return minclosed_span(list(x.elements) + list(y.elements))

    def leq(self, x, y) -> bool:
        return x.elements >= y.elements

    def act(self, g: AbelianElement, x: MinClosedSet) -> MinClosedSet:
        return MinClosedSet(frozenset(g * v for v in x.elements))

    def gmul(self, g, h):
        return g * h

    def ginv(self, g):
        return g.inverse()

    def in_monoid(self, g: AbelianElement) -> bool:
        return all(e > 0 for _, e in g.exponents)

    def factorize(self, g: AbelianElement) -> list[AbelianElement]:
        u, t = W.abelian_normal_form(g)
        return [b for b in (u.inverse(), t) if b.exponents]

    def __repr__(self):
        return f"FreeAbelianAction({''.join(self.alphabet.symbols)!r})"


class GroupItself(NiceAction):
    """View an action with T = G: every element is its own one-block factorization."""

    def __init__(self, base: NiceAction):
        self.base = base
        self.one = base.one
        self.gid = base.gid

    def meet(self, x, y):
        return self.base.meet(x, y)

    def leq(self, x, y):
        return self.base.leq(x, y)

    def act(self, g, x):
        return self.base.act(g, x)

    def gmul(self, g, h):
        return self.base.gmul(g, h)

    def ginv(self, g):
        return self.base.ginv(g)

    def in_monoid(self, g) -> bool:
        return True

    def factorize(self, g):
        return [] if g == self.gid else [g]


def _block_sign(action: NiceAction, w) -> int:
    if action.in_monoid(w):
        return 1
    if action.in_monoid(action.ginv(w)):
        return -1
    return 0


def verify_nice_factorization(action: NiceAction, g) -> bool:
    """Check the factorization returned by ``action.factorize(g)``.

    True iff the blocks alternate between T and T^-1 and, for each i < n,
    w_i . 1 >= 1 ^ (w_i ... w_n) . 1.  Raises FactorizationError if the
    blocks do not multiply to g.
    """
    ws = action.factorize(g)
    prod = action.gid
    for w in ws:
        prod = action.gmul(prod, w)
    if prod != g:
        raise FactorizationError(f"factorization {ws!r} does not multiply to {g!r}")
    signs = [_block_sign(action, w) for w in ws]
    if 0 in signs:
        return False
    if any(signs[i] == signs[i + 1] for i in range(len(signs) - 1)) and not isinstance(action, GroupItself):
        return False
    one = action.one
    suffix = action.gid
    suffixes = []
    for w in reversed(ws):
        suffix = action.gmul(w, suffix)
        suffixes.append(suffix)
    suffixes.reverse()
    for i in range(len(ws) - 1):
        rhs = action.meet(one, action.act(suffixes[i], one))
        if not action.leq(rhs, action.act(ws[i], one)):
            return False
    return True


def translates_via_span(g: str, A: Tree) -> bool:
    """g.A computed vertexwise agrees with the span of the translated vertex set."""
    return tree_act(g, A) == span(W.group_mul(g, v) for v in A.vertices)


def iter_vertices_upto(alphabet: Alphabet, radius: int) -> Iterator[str]:
    return W.enumerate_reduced(alphabet, radius)
