"""Restriction semigroups as (2,1,1)-algebras.

Every concrete algebra in the package (finite tables, semidirect products,
the free restriction monoid, M(T, Y)) subclasses :class:`RestrictionAlgebra`
and is checked against the same ten identity schemata.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Iterable, Sequence

from .errors import CongruenceError, InstanceError, ParseError, UndecidableError


class RestrictionAlgebra:
    """Interface: a product and the two unary maps ``plus`` and ``star``.

    Subclasses with infinite carriers return ``None`` from :meth:`elements`
    and override :meth:`sigma` when they have a decidable least reduced
    congruence.
    """

    identity: Any = None

    def mul(self, a, b):
        raise NotImplementedError

    def plus(self, a):
        raise NotImplementedError

    def star(self, a):
        raise NotImplementedError

    def elements(self) -> Sequence | None:
        return None

    def eq(self, a, b) -> bool:
        return a == b

    def leq(self, a, b) -> bool:
        return self.eq(a, self.mul(self.plus(a), b))

    def sigma(self, a, b) -> bool:
        elems = self.elements()
        if elems is None:
            raise UndecidableError(f"sigma is not decidable on {type(self).__name__}")
        return any(self.eq(self.mul(e, a), self.mul(e, b)) for e in projections(self))

    def format(self, a) -> str:
        return str(a)

    @property
    def has_identity(self) -> bool:
        return self.identity is not None


# --- identities ---------------------------------------------------------------


def _schemata(S: RestrictionAlgebra) -> list[tuple[str, Callable[[Any, Any], tuple[Any, Any]]]]:
    m, p, s = S.mul, S.plus, S.star
    return [
        ("x+x = x", lambda x, y: (m(p(x), x), x)),
        ("x+y+ = y+x+", lambda x, y: (m(p(x), p(y)), m(p(y), p(x)))),
        ("(x+y)+ = x+y+", lambda x, y: (p(m(p(x), y)), m(p(x), p(y)))),
        ("xy+ = (xy)+x", lambda x, y: (m(x, p(y)), m(p(m(x, y)), x))),
        ("xx* = x", lambda x, y: (m(x, s(x)), x)),
        ("x*y* = y*x*", lambda x, y: (m(s(x), s(y)), m(s(y), s(x)))),
        ("(xy*)* = x*y*", lambda x, y: (s(m(x, s(y))), m(s(x), s(y)))),
        ("y*x = x(yx)*", lambda x, y: (m(s(y), x), m(x, s(m(y, x))))),
        ("(x+)* = x+", lambda x, y: (s(p(x)), p(x))),
        ("(x*)+ = x*", lambda x, y: (p(s(x)), s(x))),
    ]


IDENTITY_NAMES = [name for name, _ in _schemata(RestrictionAlgebra())]


@dataclass
class IdentityResult:
    name: str
    passed: bool = True
    checked: int = 0
    witness: tuple | None = None


@dataclass
class IdentityReport:
    results: list[IdentityResult]

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.results)

    def failures(self) -> list[IdentityResult]:
        return [r for r in self.results if not r.passed]

    def as_dict(self, fmt: Callable[[Any], str] = str) -> dict:
        return {
            "ok": self.ok,
            "identities": [
                {
                    "name": r.name,
                    "passed": r.passed,
                    "checked": r.checked,
                    "witness": None if r.witness is None else [fmt(w) for w in r.witness],
                }
                for r in self.results
            ],
        }


def check_identities(S: RestrictionAlgebra, samples: Iterable[tuple] | None = None) -> IdentityReport:
    """Evaluate the ten restriction identities on ``samples`` (x, y[, z]) tuples.

    With ``samples=None`` the algebra must be finite and every pair is tried.
    Failures are reported with the first witness found, never raised.
    """
    if samples is None:
        elems = S.elements()
        if elems is None:
            raise UndecidableError("an infinite algebra needs explicit samples")
        samples = itertools.product(elems, repeat=2)
    results = [IdentityResult(name) for name, _ in _schemata(S)]
    laws = [law for _, law in _schemata(S)]
    for tup in samples:
        x, y = tup[0], tup[1]
        for res, law in zip(results, laws):
            res.checked += 1
            if not res.passed:
                continue
            lhs, rhs = law(x, y)
            if not S.eq(lhs, rhs):
                res.passed = False
                res.witness = (x, y)
    return IdentityReport(results)


def check_associativity(S: RestrictionAlgebra, samples: Iterable[tuple] | None = None):
    """Return the first (x, y, z) with (xy)z != x(yz), or None."""
    if samples is None:
        elems = S.elements()
        if elems is None:
            raise UndecidableError("an infinite algebra needs explicit samples")
        samples = itertools.product(elems, repeat=3)
    m = S.mul
    for x, y, z in samples:
        if not S.eq(m(m(x, y), z), m(x, m(y, z))):
            return (x, y, z)
    return None


# --- derived relations and structural predicates ------------------------------


def natural_leq(S: RestrictionAlgebra, a, b) -> bool:
    return S.leq(a, b)


def sigma_related(S: RestrictionAlgebra, a, b) -> bool:
    return S.sigma(a, b)


def _finite(S: RestrictionAlgebra, elements=None) -> Sequence:
    elems = S.elements() if elements is None else elements
    if elems is None:
        raise UndecidableError(f"{type(S).__name__} is infinite; pass a finite element sample")
    return elems


def projections(S: RestrictionAlgebra, elements=None) -> list:
    seen: list = []
    for a in _finite(S, elements):
        e = S.plus(a)
        if not any(S.eq(e, f) for f in seen):
            seen.append(e)
    return seen


def is_reduced(S: RestrictionAlgebra, elements=None) -> bool:
    return len(projections(S, elements)) == 1


def is_proper(S: RestrictionAlgebra, elements=None) -> bool:
    """a+ = b+ and a sigma b imply a = b, and the dual with *."""
    elems = _finite(S, elements)
    for a, b in itertools.combinations(elems, 2):
        if S.eq(a, b) or not S.sigma(a, b):
            continue
        if S.eq(S.plus(a), S.plus(b)) or S.eq(S.star(a), S.star(b)):
            return False
    return True


def units(S: RestrictionAlgebra, elements=None) -> list:
    one = S.identity
    if one is None:
        return []
    return [u for u in _finite(S, elements) if S.eq(S.plus(u), one) and S.eq(S.star(u), one)]


def is_factorisable(S: RestrictionAlgebra) -> bool:
    """F = P(F)U(F), computed as a literal set product.

    The dual test F = U(F)P(F) is evaluated as well; the two must agree,
    otherwise the algebra is not a restriction monoid and InstanceError is
    raised.
    """
    elems = _finite(S)
    if S.identity is None:
        return False
    P, U = projections(S), units(S)
    left = {S.mul(e, u) for e in P for u in U}
    right = {S.mul(u, e) for e in P for u in U}
    whole = set(elems)
    lf, rf = left == whole, right == whole
    if lf != rf:
        raise InstanceError("P(F)U(F) and U(F)P(F) disagree; not a restriction monoid")
    return lf


# --- finite algebras ------------------------------------------------------------


class FinRestrictionAlgebra(RestrictionAlgebra):
    """A finite (2,1,1)-algebra on ``range(n)`` given by tables."""

    def __init__(self, mul, plus, star, names=None, validate=True):
        n = len(plus)
        if len(mul) == n * n and (n == 0 or not isinstance(mul[0], (list, tuple))):
            mul = [list(mul[i * n:(i + 1) * n]) for i in range(n)]
        self.n = n
        self.table = [list(map(int, row)) for row in mul]
        self.plus_map = [int(v) for v in plus]
        self.star_map = [int(v) for v in star]
        self.names = [str(x) for x in names] if names is not None else [str(i) for i in range(n)]
        if validate:
            self._validate_shape()
        self.identity = self._find_identity()

    def _validate_shape(self):
        n = self.n
        if len(self.table) != n or any(len(r) != n for r in self.table):
            raise InstanceError(f"multiplication table must be {n}x{n}")
        if len(self.star_map) != n or len(self.names) != n:
            raise InstanceError("plus, star and names must all have length n")
        for v in itertools.chain(itertools.chain.from_iterable(self.table), self.plus_map, self.star_map):
            if not 0 <= v < n:
                raise InstanceError(f"table entry {v} out of range 0..{n - 1}")
        if len(set(self.names)) != n:
            raise InstanceError("element names must be distinct")

    def _find_identity(self):
        for e in range(self.n):
            if all(self.table[e][a] == a and self.table[a][e] == a for a in range(self.n)):
                return e
        return None

    def mul(self, a, b):
        return self.table[a][b]

    def plus(self, a):
        return self.plus_map[a]

    def star(self, a):
        return self.star_map[a]

    def elements(self):
        return range(self.n)

    def format(self, a) -> str:
        return self.names[a]

    def index(self, name: str) -> int:
        try:
            return self.names.index(str(name))
        except ValueError:
            raise ParseError(f"unknown element {name!r}") from None

    def __len__(self):
        return self.n

    def __repr__(self):
        return f"FinRestrictionAlgebra(n={self.n}, names={self.names})"

    def validate(self) -> None:
        """Raise InstanceError unless associative and all identities hold."""
        bad = check_associativity(self)
        if bad is not None:
            raise InstanceError(f"not associative at {[self.names[i] for i in bad]}")
        rep = check_identities(self)
        if not rep.ok:
            f = rep.failures()[0]
            raise InstanceError(f"identity {f.name} fails at {[self.names[i] for i in f.witness]}")

    # construction helpers

    @classmethod
    def from_algebra(cls, S: RestrictionAlgebra, elements: Sequence, names=None):
        """Tabulate a finite subalgebra given by an explicit, closed element list."""
        idx = {a: i for i, a in enumerate(elements)}
        try:
            mul = [[idx[S.mul(a, b)] for b in elements] for a in elements]
            plus = [idx[S.plus(a)] for a in elements]
            star = [idx[S.star(a)] for a in elements]
        except KeyError as exc:
            raise InstanceError(f"element list is not closed under the operations: {exc}") from None
        if names is None:
            names = [S.format(a) for a in elements]
        return cls(mul, plus, star, names)

    @classmethod
    def semilattice(cls, meet, names=None):
        n = len(meet)
        return cls(meet, list(range(n)), list(range(n)), names)

    @classmethod
    def chain(cls, k: int, names=None):
        """The k-element chain 0 > 1 > ... > k-1 (index 0 is the top)."""
        meet = [[max(i, j) for j in range(k)] for i in range(k)]
        if names is None:
            names = ["1"] + [f"e{i}" for i in range(1, k)]
        return cls.semilattice(meet, names)

    @classmethod
    def reduced_monoid(cls, mul, names=None):
        n = len(mul)
        one = next(e for e in range(n) if all(mul[e][a] == a == mul[a][e] for a in range(n)))
        return cls(mul, [one] * n, [one] * n, names)

    @classmethod
    def trivial(cls):
        return cls([[0]], [0], [0], ["1"])

    # json

    def to_json_obj(self) -> dict:
        return {
            "names": self.names,
            "mul": [v for row in self.table for v in row],
            "plus": self.plus_map,
            "star": self.star_map,
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "FinRestrictionAlgebra":
        try:
            names = obj.get("names")
            plus, star, mul = obj["plus"], obj["star"], obj["mul"]
        except (KeyError, AttributeError) as exc:
            raise ParseError(f"algebra JSON is missing field {exc}") from None
        if names is not None:
            lookup = {str(nm): i for i, nm in enumerate(names)}

            def conv(v):
                if isinstance(v, str):
                    if v not in lookup:
                        raise ParseError(f"unknown element name {v!r}")
                    return lookup[v]
                return v

            plus = [conv(v) for v in plus]
            star = [conv(v) for v in star]
            if mul and isinstance(mul[0], list):
                mul = [[conv(v) for v in row] for row in mul]
            else:
                mul = [conv(v) for v in mul]
        return cls(mul, plus, star, names)

    @classmethod
    def load(cls, path) -> "FinRestrictionAlgebra":
        with open(path) as fh:
            return cls.from_json_obj(json.load(fh))

    def dumps(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True)


# --- congruences ------------------------------------------------------------------


class UnionFind:
    def __init__(self, items: Iterable[Hashable] = ()):
        self.parent: dict = {}
        self.size: dict = {}
        for x in items:
            self.add(x)

    def add(self, x) -> None:
        if x not in self.parent:
            self.parent[x] = x
            self.size[x] = 1

    def find(self, x):
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True

    def same(self, a, b) -> bool:
        return self.find(a) == self.find(b)

    def classes(self) -> list[list]:
        groups: dict = {}
        for x in self.parent:
            groups.setdefault(self.find(x), []).append(x)
        return list(groups.values())


@dataclass
class Congruence:
    """A partition of ``range(n)``, stored as canonical sorted blocks."""

    n: int
    blocks: list[list[int]] = field(default_factory=list)

    def __post_init__(self):
        self.blocks = sorted(sorted(b) for b in self.blocks)
        self._block_of = [0] * self.n
        seen = 0
        for i, b in enumerate(self.blocks):
            for x in b:
                self._block_of[x] = i
            seen += len(b)
        if seen != self.n or sorted(x for b in self.blocks for x in b) != list(range(self.n)):
            raise CongruenceError("blocks do not partition the carrier")

    @classmethod
    def equality(cls, n: int) -> "Congruence":
        return cls(n, [[i] for i in range(n)])

    @classmethod
    def universal(cls, n: int) -> "Congruence":
        return cls(n, [list(range(n))] if n else [])

    @classmethod
    def from_union_find(cls, n: int, uf: UnionFind) -> "Congruence":
        return cls(n, uf.classes())

    def block_of(self, a: int) -> int:
        return self._block_of[a]

    def related(self, a: int, b: int) -> bool:
        return self._block_of[a] == self._block_of[b]

    def violation(self, S: FinRestrictionAlgebra):
        """First context breaking compatibility, or None."""
        for b in self.blocks:
            rep = b[0]
            for x in b[1:]:
                if not self.related(S.plus(rep), S.plus(x)):
                    return ("plus", rep, x)
                if not self.related(S.star(rep), S.star(x)):
                    return ("star", rep, x)
                for c in range(S.n):
                    if not self.related(S.mul(c, rep), S.mul(c, x)):
                        return ("left", c, rep, x)
                    if not self.related(S.mul(rep, c), S.mul(x, c)):
                        return ("right", c, rep, x)
        return None

    def is_compatible(self, S: FinRestrictionAlgebra) -> bool:
        return self.violation(S) is None

    def __eq__(self, other) -> bool:
        return isinstance(other, Congruence) and self.n == other.n and self.blocks == other.blocks


def finite_congruence_closure(S: FinRestrictionAlgebra, pairs: Iterable[tuple[int, int]]) -> Congruence:
    """Least (2,1,1)-congruence containing ``pairs``.

    Worklist over merged pairs; each pair is pushed through every one-step
    context (left and right translation, plus, star).  A pair only enters the
    worklist when it merges two classes, so there are at most n - 1 of them
    beyond the seeds.
    """
    n = S.n
    uf = UnionFind(range(n))
    work = []
    for a, b in pairs:
        if uf.union(a, b):
            work.append((a, b))
    mul, plus, star = S.table, S.plus_map, S.star_map
    while work:
        a, b = work.pop()
        ctx = [(plus[a], plus[b]), (star[a], star[b])]
        ra, rb = mul[a], mul[b]
        for c in range(n):
            ctx.append((mul[c][a], mul[c][b]))
            ctx.append((ra[c], rb[c]))
        for x, y in ctx:
            if uf.union(x, y):
                work.append((x, y))
    return Congruence.from_union_find(n, uf)


def sigma_congruence(S: FinRestrictionAlgebra) -> Congruence:
    uf = UnionFind(range(S.n))
    for a, b in itertools.combinations(range(S.n), 2):
        if S.sigma(a, b):
            uf.union(a, b)
    return Congruence.from_union_find(S.n, uf)


def quotient_finite(S: FinRestrictionAlgebra, rho: Congruence) -> FinRestrictionAlgebra:
    """Tables on the blocks of rho; block i is represented by its least element."""
    if rho.n != S.n:
        raise CongruenceError("congruence and algebra sizes differ")
    bad = rho.violation(S)
    if bad is not None:
        raise CongruenceError(f"not compatible: {bad[0]} context {bad[1:]}", context=bad)
    reps = [b[0] for b in rho.blocks]
    blk = rho.block_of
    mul = [[blk(S.mul(a, b)) for b in reps] for a in reps]
    plus = [blk(S.plus(a)) for a in reps]
    star = [blk(S.star(a)) for a in reps]
    names = ["{" + ",".join(S.names[x] for x in b) + "}" if len(b) > 1 else S.names[b[0]] for b in rho.blocks]
    return FinRestrictionAlgebra(mul, plus, star, names)


def is_morphism(S: RestrictionAlgebra, T: RestrictionAlgebra, f: Callable, elements: Sequence) -> bool:
    """Check f commutes with product, plus and star on the given elements."""
    for a in elements:
        if not T.eq(f(S.plus(a)), T.plus(f(a))) or not T.eq(f(S.star(a)), T.star(f(a))):
            return False
    for a, b in itertools.product(elements, repeat=2):
        if not T.eq(f(S.mul(a, b)), T.mul(f(a), f(b))):
            return False
    return True
