"""The term family used to describe generated congruences, and the
constructive rewritings that move its constants into R.

A tower of depth i is built from (y0 x z0) by i alternating unary levels:
a '+' level j wraps as (y_j · t)⁺ and a '*' level j wraps as (t · z_j)*.
The innermost operation fixes the family: '+' for T(+), '*' for T(*).
A sandwich is y x z or y t z around a tower t.

Constant vectors are ordered as the slot names say: for a tower
(y0, z0, c1, ..., ci) with c_j the constant of level j; for a sandwich
(y, z) followed by the inner tower's constants.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .actions import NiceAction, verify_nice_factorization
from .algebra import RestrictionAlgebra
from .errors import ArityError, DomainError, FactorizationError, NicenessError
from .semidirect import SDElement, down

OPS = ("+", "*")


def _other(op: str) -> str:
    return "*" if op == "+" else "+"


@dataclass(frozen=True)
class Tower:
    depth: int
    inner: str

    def __post_init__(self):
        if self.inner not in OPS:
            raise ValueError(f"innermost operation must be '+' or '*', got {self.inner!r}")
        if self.depth < 0:
            raise ValueError("depth must be nonnegative")

    def op(self, level: int) -> str:
        return self.inner if level % 2 == 0 else _other(self.inner)

    @property
    def outer(self) -> str:
        return self.op(self.depth)

    @property
    def family(self) -> str:
        return self.inner

    @property
    def arity(self) -> int:
        return self.depth + 2

    @property
    def slots(self) -> list[str]:
        names = ["y0", "z0"]
        for j in range(1, self.depth + 1):
            names.append(("y" if self.op(j) == "+" else "z") + str(j))
        return names

    def extend(self) -> "Tower":
        return Tower(self.depth + 1, self.inner)

    def evaluate(self, alg: RestrictionAlgebra, c, consts: Sequence):
        _check_arity(self, consts)
        val = alg.mul(alg.mul(consts[0], c), consts[1])
        val = alg.plus(val) if self.inner == "+" else alg.star(val)
        for j in range(1, self.depth + 1):
            k = consts[j + 1]
            if self.op(j) == "+":
                val = alg.plus(alg.mul(k, val))
            else:
                val = alg.star(alg.mul(val, k))
        return val

    @property
    def code(self) -> str:
        return f"tower:{self.depth}{self.inner}"

    def pretty(self) -> str:
        s = f"(y0 x z0)^{self.inner}"
        for j in range(1, self.depth + 1):
            s = f"(y{j} {s})^+" if self.op(j) == "+" else f"({s} z{j})^*"
        return s

    def __str__(self):
        return self.pretty()


@dataclass(frozen=True)
class Sandwich:
    inner: Tower | None = None

    @property
    def arity(self) -> int:
        return 2 + (self.inner.arity if self.inner else 0)

    @property
    def slots(self) -> list[str]:
        return ["y", "z"] + (self.inner.slots if self.inner else [])

    def evaluate(self, alg: RestrictionAlgebra, c, consts: Sequence):
        _check_arity(self, consts)
        mid = c if self.inner is None else self.inner.evaluate(alg, c, consts[2:])
        return alg.mul(alg.mul(consts[0], mid), consts[1])

    def pretty(self) -> str:
        return "y x z" if self.inner is None else f"y {self.inner.pretty()} z"

    @property
    def code(self) -> str:
        """Short form accepted by parse_term."""
        return "yxz" if self.inner is None else f"sandwich:{self.inner.depth}{self.inner.inner}"

    def __str__(self):
        return self.pretty()


Term = Tower | Sandwich


def _check_arity(t, consts) -> None:
    if len(consts) != t.arity:
        raise ArityError(f"{t.pretty()} takes {t.arity} constants, got {len(consts)}")


def build_term(depth: int, innermost: str) -> Tower:
    return Tower(depth, innermost)


def eval_term(t: Term, alg: RestrictionAlgebra, c, consts: Sequence):
    return t.evaluate(alg, c, consts)


def parse_term(text: str) -> Term:
    """Accept ``yxz``, ``tower:<depth><op>`` or ``sandwich:<depth><op>``."""
    s = text.strip().replace(" ", "")
    if s in ("yxz", "sandwich"):
        return Sandwich()
    kind, _, code = s.partition(":")
    if kind not in ("tower", "sandwich") or len(code) < 2 or code[-1] not in OPS or not code[:-1].isdigit():
        raise DomainError(f"cannot parse term {text!r}; use yxz, tower:<i><op> or sandwich:<i><op>")
    tower = Tower(int(code[:-1]), code[-1])
    return tower if kind == "tower" else Sandwich(tower)


# --- one-directional form -------------------------------------------------------


def onedir_params(action: NiceAction, t: Tower, consts: Sequence[SDElement]):
    """(U, V, g) with t(c, α) = (U ∧ g·C̃ ∧ g·c̃·V, 1) for every c in R."""
    if not isinstance(t, Tower):
        raise DomainError("onedir_params needs a tower term")
    _check_arity(t, consts)
    act, meet, gmul, ginv = action.act, action.meet, action.gmul, action.ginv
    (A, a), (B, b) = consts[0], consts[1]
    if t.inner == "+":
        U, V, g = A, B, a
    else:
        bi = ginv(b)
        U, V, g = act(bi, B), act(ginv(a), A), bi
    for j in range(1, t.depth + 1):
        A, a = consts[j + 1]
        if t.op(j) == "+":
            U, g = meet(A, act(a, U)), gmul(a, g)
        else:
            ai = ginv(a)
            U, g = meet(act(ai, U), act(ai, A)), gmul(ai, g)
    return U, V, g


def tilde(action: NiceAction, c: SDElement, family: str):
    if family == "+":
        return c.first, c.second
    ci = action.ginv(c.second)
    return action.act(ci, c.first), ci


def onedir_value(action: NiceAction, U, V, g, c: SDElement, family: str, with_one: bool = False) -> SDElement:
    """(U ∧ g·C̃ ∧ g·c̃·V, 1), optionally met with 𝟏 (the shape yuck_construct produces)."""
    Ct, ct = tilde(action, c, family)
    X = action.meet(U, action.meet(action.act(g, Ct), action.act(action.gmul(g, ct), V)))
    if with_one:
        X = action.meet(action.one, X)
    return SDElement(X, action.gid)


# --- towers with constants in R ---------------------------------------------------


def _factors(action: NiceAction, g) -> list:
    try:
        ok = verify_nice_factorization(action, g)
    except (FactorizationError, NotImplementedError) as exc:
        raise NicenessError(f"no usable factorization of {action.format_g(g)}: {exc}") from None
    if not ok:
        raise NicenessError(f"factorization of {action.format_g(g)} is not nice")
    return action.factorize(g)


def yuck_construct(action: NiceAction, U, V, g, variant: str = "+") -> tuple[Tower, list[SDElement]]:
    """A tower t of family ``variant`` and constants β in R with
    t(c, β) = (𝟏 ∧ U ∧ g·C̃ ∧ g·c̃·V, 1) for every c in R."""
    if variant not in OPS:
        raise DomainError(f"variant must be '+' or '*', got {variant!r}")
    ws = _factors(action, g)
    return _yuck(action, U, V, ws, variant)


def _yuck(action: NiceAction, U, V, ws: list, variant: str):
    one, gid = action.one, action.gid
    meet, act, ginv = action.meet, action.act, action.ginv
    top = SDElement(one, gid)
    V1 = SDElement(meet(one, V), gid)
    if len(ws) <= 1:
        w = ws[0] if ws else gid
        # g = 1 takes the depth-0 rows for both variants
        positive = action.in_monoid(w) if ws else variant == "+"
        if positive:
            k = SDElement(meet(meet(one, U), act(w, one)), w)
        else:
            wi = ginv(w)
            k = SDElement(meet(meet(one, act(wi, U)), act(wi, one)), wi)
        if variant == "+":
            return (Tower(0, "+"), [k, V1]) if positive else (Tower(1, "+"), [top, V1, k])
        return (Tower(1, "*"), [V1, top, k]) if positive else (Tower(0, "*"), [V1, k])
    w1 = ws[0]
    w1i = ginv(w1)
    t, beta = _yuck(action, act(w1i, U), V, ws[1:], variant)
    nt = t.extend()
    if action.in_monoid(w1):
        if nt.outer != "+":
            raise NicenessError("factorization does not alternate")
        k = SDElement(meet(one, act(w1, one)), w1)
    else:
        if nt.outer != "*":
            raise NicenessError("factorization does not alternate")
        k = SDElement(meet(one, act(w1i, one)), w1i)
    return nt, beta + [k]


# --- pulling sandwich terms into R ----------------------------------------------


def two_transform(action: NiceAction, t: Term, consts: Sequence[SDElement]) -> tuple[Sandwich, list[SDElement]]:
    """t′ and β in R with t(c, α)↓ = t′(c, β) for every c in R."""
    if not isinstance(t, Sandwich):
        raise DomainError("two_transform needs a sandwich term (y x z or y t z)")
    _check_arity(t, consts)
    y, z = consts[0], consts[1]
    if t.inner is None:
        return t, [down(action, y), down(action, z)]
    (A, a), (B, b) = y, z
    U, V, g = onedir_params(action, t.inner, consts[2:])
    act, meet = action.act, action.meet
    Ustar = meet(A, meet(act(a, U), act(a, B)))
    inner, beta = yuck_construct(action, Ustar, V, action.gmul(a, g), t.inner.inner)
    ab = action.gmul(a, b)
    head = [SDElement(action.one, action.gid), SDElement(meet(action.one, act(ab, action.one)), ab)]
    return Sandwich(inner), head + beta
