"""Partial actions of a free monoid on a finite semilattice.

A :class:`PartialAction` assigns to each letter an isomorphism between two
ideals of a finite semilattice Y with top 𝟏.  From it we get

* the restriction monoid M(Ω*, Y) of pairs (A, t) with A∘t defined,
* the extension α_g to the free group, letter by letter, and the elements
  M_g (top of the range of α_g),
* the semilattice X of χ̄-classes [A, g] with the group acting by
  h·[A, g] = [A, hg]; this is again a nice action and plugs into the
  semidirect-product machinery.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterator, Mapping

from . import words as W
from .actions import NiceAction
from .algebra import RestrictionAlgebra
from .errors import BottomlessError, DomainError, InstanceError, ParseError
from .words import Alphabet


class FiniteSemilattice:
    def __init__(self, meet, names=None):
        self.meet_table = [list(map(int, r)) for r in meet]
        self.n = len(self.meet_table)
        self.names = [str(x) for x in names] if names else [str(i) for i in range(self.n)]
        m = self.meet_table
        for a, b in itertools.product(range(self.n), repeat=2):
            if m[a][b] != m[b][a] or m[a][a] != a:
                raise InstanceError("meet table is not commutative and idempotent")
        for a, b, c in itertools.product(range(self.n), repeat=3):
            if m[m[a][b]][c] != m[a][m[b][c]]:
                raise InstanceError("meet table is not associative")
        tops = [e for e in range(self.n) if all(m[e][a] == a for a in range(self.n))]
        if not tops:
            raise InstanceError("semilattice has no identity element")
        self.top = tops[0]

    def meet(self, a: int, b: int) -> int:
        return self.meet_table[a][b]

    def leq(self, a: int, b: int) -> bool:
        return self.meet_table[a][b] == a

    def down(self, a: int) -> frozenset[int]:
        return frozenset(x for x in range(self.n) if self.leq(x, a))

    def is_ideal(self, s) -> bool:
        return all(self.leq(x, a) <= (x in s) for a in s for x in range(self.n))

    def greatest(self, s) -> int | None:
        for a in s:
            if all(self.leq(x, a) for x in s):
                return a
        return None

    def index(self, name) -> int:
        try:
            return self.names.index(str(name))
        except ValueError:
            raise ParseError(f"unknown semilattice element {name!r}") from None


# a partial map is a dict {x: α(x)}; composition and inversion are relational
PMap = Mapping[int, int]


def compose(f: PMap, g: PMap) -> dict[int, int]:
    """f ∘ g: apply g first."""
    return {x: f[y] for x, y in g.items() if y in f}


def inverse(f: PMap) -> dict[int, int]:
    return {y: x for x, y in f.items()}


class PartialAction:
    def __init__(self, Y: FiniteSemilattice, maps: Mapping[str, PMap]):
        self.Y = Y
        self.alphabet = Alphabet(sorted(maps))
        self.maps = {k: dict(v) for k, v in maps.items()}
        self.inv_maps = {k: inverse(v) for k, v in self.maps.items()}
        self._cache: dict[str, dict[int, int]] = {"": {a: a for a in range(Y.n)}}
        self._validate()

    def _validate(self):
        Y = self.Y
        for k, f in self.maps.items():
            dom, rng = frozenset(f), frozenset(f.values())
            if len(rng) != len(dom):
                raise InstanceError(f"map of {k!r} is not injective")
            if not (Y.is_ideal(dom) and Y.is_ideal(rng)):
                raise InstanceError(f"domain and range of {k!r} must be ideals")
            for a, b in itertools.product(dom, repeat=2):
                if f[Y.meet(a, b)] != Y.meet(f[a], f[b]):
                    raise InstanceError(f"map of {k!r} is not a semilattice isomorphism")
            if dom and (Y.greatest(dom) is None or Y.greatest(rng) is None):
                raise InstanceError(f"domain and range of {k!r} must be principal ideals")

    # maps on words

    def alpha(self, g: str) -> dict[int, int]:
        """α_g for a reduced word, composed letter by letter (first letter outermost)."""
        g = self.alphabet.check(g)
        hit = self._cache.get(g)
        if hit is not None:
            return hit
        head, tail = g[0], self.alpha(g[1:])
        f = self.maps[head] if head.islower() else self.inv_maps[head.lower()]
        res = compose(f, tail)
        self._cache[g] = res
        return res

    def diamond(self, g: str, A: int) -> int | None:
        """g◇A, or None when undefined."""
        return self.alpha(g).get(A)

    def circ(self, A: int, g: str) -> int | None:
        """A∘g = α_g⁻¹(A), or None when undefined."""
        return self.alpha(W.invert(g)).get(A)

    def m_identity(self, g: str) -> int:
        """M_g, the greatest element of the range of α_g."""
        rng = set(self.alpha(g).values())
        if not rng:
            raise BottomlessError(f"α_{W.format_word(g)} has empty range")
        top = self.Y.greatest(rng)
        if top is None:
            raise BottomlessError(f"range of α_{W.format_word(g)} has no greatest element")
        return top

    # json

    @classmethod
    def from_json_obj(cls, obj: dict) -> "PartialAction":
        try:
            ys, letters = obj["Y"], obj["letters"]
            Y = FiniteSemilattice(ys["meet"], ys.get("names"))
        except (KeyError, TypeError) as exc:
            raise ParseError(f"partial action JSON is missing field {exc}") from None
        maps = {}
        for k, entry in letters.items():
            raw = entry.get("map", {}) if isinstance(entry, dict) else entry
            f = {Y.index(x): Y.index(y) for x, y in raw.items()}
            if isinstance(entry, dict):
                if "domain" in entry and {Y.index(x) for x in entry["domain"]} != set(f):
                    raise InstanceError(f"declared domain of {k!r} does not match its map")
                if "range" in entry and {Y.index(x) for x in entry["range"]} != set(f.values()):
                    raise InstanceError(f"declared range of {k!r} does not match its map")
            maps[k] = f
        return cls(Y, maps)

    @classmethod
    def load(cls, path) -> "PartialAction":
        with open(path) as fh:
            return cls.from_json_obj(json.load(fh))

    def to_json_obj(self) -> dict:
        nm = self.Y.names
        return {
            "Y": {"names": nm, "meet": self.Y.meet_table},
            "letters": {k: {"map": {nm[x]: nm[y] for x, y in sorted(f.items())}} for k, f in sorted(self.maps.items())},
        }


# --- M(Ω*, Y) -----------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class MElement:
    first: int
    second: str


class MAlgebra(RestrictionAlgebra):
    """(A, t)(B, u) = (t◇((A∘t) ∧ B), tu), (A, t)+ = (A, 1), (A, t)* = (A∘t, 1)."""

    def __init__(self, pa: PartialAction):
        self.pa = pa
        self.identity = MElement(pa.Y.top, "")

    def valid(self, x: MElement) -> bool:
        return W.is_positive(x.second) and self.pa.circ(x.first, x.second) is not None

    def mul(self, x, y):
        pa = self.pa
        inner = pa.Y.meet(pa.circ(x.first, x.second), y.first)
        return MElement(pa.diamond(x.second, inner), x.second + y.second)

    def plus(self, x):
        return MElement(x.first, "")

    def star(self, x):
        return MElement(self.pa.circ(x.first, x.second), "")

    def sigma(self, x, y) -> bool:
        return x.second == y.second

    def leq(self, x, y) -> bool:
        return x.second == y.second and self.pa.Y.leq(x.first, y.first)

    def fragment(self, max_len: int) -> list[MElement]:
        out = []
        for t in W.enumerate_positive(self.pa.alphabet, max_len):
            for A in sorted(set(self.pa.alpha(t).values())):
                out.append(MElement(A, t))
        return out

    def format(self, x) -> str:
        return f"({self.pa.Y.names[x.first]}, {W.format_word(x.second)})"


def greatest_in_sigma_classes(M: MAlgebra, max_len: int) -> list[str]:
    """Words t (|t| ≤ max_len) whose σ-class lacks (M_t, t) as greatest element."""
    bad = []
    by_t: dict[str, list[MElement]] = {}
    for x in M.fragment(max_len):
        by_t.setdefault(x.second, []).append(x)
    for t, xs in by_t.items():
        top = MElement(M.pa.m_identity(t), t)
        if not M.valid(top) or not all(M.leq(x, top) for x in xs):
            bad.append(t)
    return bad


def check_mg_identity(pa: PartialAction, max_len: int) -> list[str]:
    """Reduced g with |g| ≤ max_len violating M_g = g◇M_{g⁻¹}; empty ranges are skipped."""
    bad = []
    for g in W.enumerate_reduced(pa.alphabet, max_len):
        try:
            lhs, rhs_arg = pa.m_identity(g), pa.m_identity(W.invert(g))
        except BottomlessError:
            continue
        if pa.diamond(g, rhs_arg) != lhs:
            bad.append(g)
    return bad


def bottomless_words(pa: PartialAction, max_len: int) -> list[str]:
    out = []
    for g in W.enumerate_reduced(pa.alphabet, max_len):
        try:
            pa.m_identity(g)
        except BottomlessError:
            out.append(g)
    return out


# --- χ̄-classes ------------------------------------------------------------------------


@dataclass(frozen=True)
class ChiClass:
    """Canonical representative (A, p): p is the shortest prefix of g admitting a member."""

    A: int
    g: str


def chi_class(pa: PartialAction, A: int, g: str) -> ChiClass:
    g = W.reduce(g)
    ginv = W.invert(g)
    for k in range(len(g) + 1):
        p = g[:k]
        B = pa.circ(A, W.group_mul(ginv, p))
        if B is not None:
            return ChiClass(B, p)
    raise DomainError("unreachable: (A, g) is a member of its own class")


def chi_equal(pa: PartialAction, x: tuple[int, str], y: tuple[int, str]) -> bool:
    """(A, g) and (B, h) lie in the same class iff A∘g⁻¹h is defined and equals B."""
    (A, g), (B, h) = x, y
    return pa.circ(A, W.group_mul(W.invert(g), h)) == B


def chi_members(pa: PartialAction, x: ChiClass, max_len: int) -> Iterator[tuple[int, str]]:
    for h in W.enumerate_reduced(pa.alphabet, max_len):
        B = pa.circ(x.A, W.group_mul(W.invert(x.g), h))
        if B is not None:
            yield (B, h)


def chi_meet(pa: PartialAction, x: ChiClass, y: ChiClass) -> ChiClass:
    """[A,g] ∧ [B,h] = [k◇((A ∧ M_k)∘k ∧ B), g] with k = g⁻¹h."""
    Y = pa.Y
    k = W.group_mul(W.invert(x.g), y.g)
    Mk = pa.m_identity(k)
    inner = Y.meet(pa.circ(Y.meet(x.A, Mk), k), y.A)
    return chi_class(pa, pa.diamond(k, inner), x.g)


def chi_act(pa: PartialAction, h: str, x: ChiClass) -> ChiClass:
    return chi_class(pa, x.A, W.group_mul(h, x.g))


class ChiAction(NiceAction):
    """The free group acting on χ̄-classes; Y sits inside as the classes [A, 1]."""

    def __init__(self, pa: PartialAction):
        self.pa = pa
        self.one = ChiClass(pa.Y.top, "")
        self.gid = ""

    def meet(self, x, y):
        return chi_meet(self.pa, x, y)

    def leq(self, x, y) -> bool:
        return chi_meet(self.pa, x, y) == x

    def act(self, g, x):
        return chi_act(self.pa, g, x)

    gmul = staticmethod(W.group_mul)
    ginv = staticmethod(W.invert)
    in_monoid = staticmethod(W.is_positive)
    factorize = staticmethod(W.nice_factorization_free)

    def in_Y(self, x) -> bool:
        return x.g == ""

    def format_x(self, x) -> str:
        return f"[{self.pa.Y.names[x.A]}, {W.format_word(x.g)}]"

    def format_g(self, g) -> str:
        return W.format_word(g)

    def embed(self, A: int) -> ChiClass:
        return ChiClass(A, "")

    def classes(self, max_len: int) -> list[ChiClass]:
        out = set()
        for g in W.enumerate_reduced(self.pa.alphabet, max_len):
            for A in range(self.pa.Y.n):
                out.add(chi_class(self.pa, A, g))
        return sorted(out, key=lambda c: (len(c.g), c.g, c.A))


@dataclass
class PrefixReport:
    checked: int
    violations: list[tuple[str, str]]
    mismatches: list[tuple[str, str]]
    bottomless: list[tuple[str, str]]

    @property
    def ok(self) -> bool:
        return not self.violations and not self.mismatches


def _common_prefix(g: str, h: str) -> bool:
    return bool(g) and bool(h) and g[0] == h[0]


def check_prefix_criterion(pa: PartialAction, maxlen: int) -> PrefixReport:
    """[𝟏,g] ∧ [𝟏,h] lies in Y and equals [h◇M_{h⁻¹g}, 1] whenever g and h
    share no nonempty prefix."""
    act = ChiAction(pa)
    top = pa.Y.top
    words = list(W.enumerate_reduced(pa.alphabet, maxlen))
    checked, violations, mismatches, bottomless = 0, [], [], []
    for g, h in itertools.product(words, repeat=2):
        if g == h or _common_prefix(g, h):
            continue
        checked += 1
        try:
            m = act.meet(chi_class(pa, top, g), chi_class(pa, top, h))
            expect = pa.diamond(h, pa.m_identity(W.group_mul(W.invert(h), g)))
        except BottomlessError:
            bottomless.append((g, h))
            continue
        if not act.in_Y(m):
            violations.append((g, h))
        elif expect is None or m != ChiClass(expect, ""):
            mismatches.append((g, h))
    return PrefixReport(checked, violations, mismatches, bottomless)


# --- the identification of M(Ω*, Y) with R ------------------------------------------------


def m_to_R(x: MElement):
    from .semidirect import SDElement

    return SDElement(ChiClass(x.first, ""), x.second)


def check_m_equals_R(pa: PartialAction, max_len: int) -> dict[str, bool]:
    """Compare M(Ω*, Y) with R inside the χ̄-semidirect product on a fragment."""
    from .semidirect import SDElement, SemidirectProduct, in_R

    M = MAlgebra(pa)
    act = ChiAction(pa)
    SD = SemidirectProduct(act)
    frag = M.fragment(max_len)
    image_in_R = all(in_R(act, m_to_R(x)) for x in frag)
    ops = all(
        m_to_R(M.plus(x)) == SD.plus(m_to_R(x)) and m_to_R(M.star(x)) == SD.star(m_to_R(x)) for x in frag
    ) and all(
        m_to_R(M.mul(x, y)) == SD.mul(m_to_R(x), m_to_R(y))
        for x, y in itertools.product(frag, repeat=2)
        if len(x.second) + len(y.second) <= max_len
    )
    # every R-element with a Y first component and a short second comes from M
    onto = True
    fragset = set(frag)
    for t in W.enumerate_positive(pa.alphabet, max_len):
        for A in range(pa.Y.n):
            r = SDElement(ChiClass(A, ""), t)
            if in_R(act, r) != (MElement(A, t) in fragset):
                onto = False
    return {"image_in_R": image_in_R, "operations": ops, "onto": onto}


# --- built-in instances ------------------------------------------------------------------


def chain_example() -> PartialAction:
    """Y = {1 > e}; α_a and α_b are the identity of the ideal {e}."""
    Y = FiniteSemilattice([[0, 1], [1, 1]], ["1", "e"])
    return PartialAction(Y, {"a": {1: 1}, "b": {1: 1}})


def diamond_example() -> PartialAction:
    """Y = {1, p, q, 0} with p, q incomparable; α_a: ↓p → ↓q, α_b swaps p and q."""
    meet = [
        [0, 1, 2, 3],
        [1, 1, 3, 3],
        [2, 3, 2, 3],
        [3, 3, 3, 3],
    ]
    Y = FiniteSemilattice(meet, ["1", "p", "q", "0"])
    return PartialAction(Y, {"a": {1: 2, 3: 3}, "b": {0: 0, 1: 2, 2: 1, 3: 3}})
