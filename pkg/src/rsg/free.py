"""The free restriction monoid FR(Ω) as the subalgebra R of X⋊Ω*.

Elements are :class:`SDElement` pairs (A, ā) with ε ∈ A, ā positive and
ā ∈ A.  :func:`decompose` writes any such element as a term over the
generators, which is what makes evaluation into other algebras possible.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Mapping

from . import words as W
from .actions import ONE, FreeGroupTreeAction, Tree, enumerate_subtrees, tree_act
from .algebra import RestrictionAlgebra
from .errors import AlphabetError, DomainError
from .semidirect import SDElement, SemidirectProduct


# --- generator terms ------------------------------------------------------------


class GTerm:
    """Term over generator symbols with product, plus and star."""

    def evaluate(self, alg: RestrictionAlgebra, assignment: Mapping[str, object]):
        raise NotImplementedError

    def letters(self) -> set[str]:
        raise NotImplementedError


@dataclass(frozen=True)
class Gen(GTerm):
    symbol: str

    def evaluate(self, alg, assignment):
        try:
            return assignment[self.symbol]
        except KeyError:
            raise DomainError(f"assignment has no value for generator {self.symbol!r}") from None

    def letters(self):
        return {self.symbol}

    def __str__(self):
        return self.symbol


@dataclass(frozen=True)
class One(GTerm):
    def evaluate(self, alg, assignment):
        if alg.identity is None:
            raise DomainError("term uses the identity but the target algebra has none")
        return alg.identity

    def letters(self):
        return set()

    def __str__(self):
        return "1"


@dataclass(frozen=True)
class Mul(GTerm):
    factors: tuple[GTerm, ...]

    def evaluate(self, alg, assignment):
        it = iter(self.factors)
        acc = next(it).evaluate(alg, assignment)
        for f in it:
            acc = alg.mul(acc, f.evaluate(alg, assignment))
        return acc

    def letters(self):
        return set().union(*(f.letters() for f in self.factors))

    def __str__(self):
        return "·".join(str(f) for f in self.factors)


@dataclass(frozen=True)
class Plus(GTerm):
    body: GTerm

    def evaluate(self, alg, assignment):
        return alg.plus(self.body.evaluate(alg, assignment))

    def letters(self):
        return self.body.letters()

    def __str__(self):
        return f"({self.body})⁺"


@dataclass(frozen=True)
class Star(GTerm):
    body: GTerm

    def evaluate(self, alg, assignment):
        return alg.star(self.body.evaluate(alg, assignment))

    def letters(self):
        return self.body.letters()

    def __str__(self):
        return f"({self.body})*"


def mul(*terms: GTerm) -> GTerm:
    """Flatten nested products and drop identity factors."""
    flat: list[GTerm] = []
    for t in terms:
        if isinstance(t, One):
            continue
        flat.extend(t.factors if isinstance(t, Mul) else (t,))
    if not flat:
        return One()
    return flat[0] if len(flat) == 1 else Mul(tuple(flat))


# --- FR(Ω) ----------------------------------------------------------------------


class FreeRestrictionMonoid(SemidirectProduct):
    def __init__(self, alphabet: W.Alphabet):
        super().__init__(FreeGroupTreeAction(alphabet), group=False)
        self.alphabet = alphabet

    def generator(self, a: str) -> SDElement:
        if len(a) != 1 or not a.islower() or a not in self.alphabet:
            raise AlphabetError(f"{a!r} is not a generator of {self.alphabet!r}")
        return SDElement(Tree(frozenset(["", a])), a)

    def generators(self) -> dict[str, SDElement]:
        return {a: self.generator(a) for a in self.alphabet.symbols}

    def is_element(self, x: SDElement) -> bool:
        return W.is_positive(x.second) and "" in x.first and x.second in x.first

    def check(self, x: SDElement) -> SDElement:
        if not self.is_element(x):
            raise DomainError(f"{self.format(x)} is not an element of FR")
        self.alphabet.check("".join(x.first.vertices) + x.second)
        return x

    def elements_upto(self, max_size: int) -> list[SDElement]:
        """Every element whose tree has at most ``max_size`` vertices."""
        out = []
        for A in enumerate_subtrees(self.alphabet, max_size):
            for v in A.sorted_vertices():
                if W.is_positive(v):
                    out.append(SDElement(A, v))
        return out


def _children(A: Tree) -> dict[str, Tree]:
    """Subtrees hanging off ε, keyed by the first letter, each translated so
    its root sits at ε."""
    groups: dict[str, set[str]] = {}
    for v in A.vertices:
        if v:
            groups.setdefault(v[0], set()).add(v)
    return {ch: tree_act(ch.swapcase(), Tree(frozenset(vs))) for ch, vs in groups.items()}


def _edge_order(ch: str):
    return (ch.isupper(), ch.lower())


def projection_term(A: Tree) -> GTerm:
    """A term evaluating to (A, ε) for a tree A containing ε."""
    if "" not in A.vertices:
        raise DomainError(f"tree {A} does not contain ε")
    factors = []
    kids = _children(A)
    for ch in sorted(kids, key=_edge_order):
        sub = projection_term(kids[ch])
        if ch.islower():
            factors.append(Plus(mul(Gen(ch), sub)))
        else:
            factors.append(Star(mul(sub, Gen(ch.lower()))))
    return mul(*factors)


def word_term(w: str) -> GTerm:
    return mul(*(Gen(ch) for ch in w))


def decompose(x: SDElement) -> GTerm:
    A, w = x.first, x.second
    if not W.is_positive(w) or "" not in A.vertices or w not in A.vertices:
        raise DomainError(f"({A}, {W.format_word(w)}) is not an element of FR")
    return mul(projection_term(A), word_term(w))


def evaluate_morphism(x: SDElement, target: RestrictionAlgebra, assignment: Mapping[str, object]):
    """Image of x under the morphism FR(Ω) -> target extending ``assignment``."""
    return decompose(x).evaluate(target, assignment)


class ReducedFreeMonoid(RestrictionAlgebra):
    """Ω* with both unary operations constant 1."""

    identity = ""

    def mul(self, a, b):
        return a + b

    def plus(self, a):
        return ""

    def star(self, a):
        return ""

    def format(self, a):
        return W.format_word(a)


def bfs_closure(fr: FreeRestrictionMonoid, max_size: int) -> set[SDElement]:
    """Close {1, generators} under the operations, discarding trees over the bound.

    Tree size never shrinks along the subterms of a decomposition, so this
    reaches every element within the bound.
    """
    seen = {fr.identity, *fr.generators().values()}
    frontier = list(seen)
    ok: Callable[[SDElement], bool] = lambda z: len(z.first) <= max_size
    while frontier:
        new = []

        def push(z):
            if ok(z) and z not in seen:
                seen.add(z)
                new.append(z)

        cur = list(seen)
        for x in frontier:
            push(fr.plus(x))
            push(fr.star(x))
            for y in cur:
                push(fr.mul(x, y))
                push(fr.mul(y, x))
        frontier = new
    return seen


def parse_assignment(text: str, parse_value: Callable[[str], object]) -> dict[str, object]:
    """``a=3,b=5`` -> {"a": parse_value("3"), ...}."""
    out: dict[str, object] = {}
    for part in filter(None, (p.strip() for p in text.split(","))):
        if "=" not in part:
            raise DomainError(f"expected letter=value, got {part!r}")
        k, v = (s.strip() for s in part.split("=", 1))
        out[k] = parse_value(v)
    return out


def letters_used(xs: Iterable[SDElement]) -> set[str]:
    out = set()
    for x in xs:
        out |= {ch.lower() for v in x.first.vertices for ch in v}
    return out


IDENTITY_TREE = ONE
