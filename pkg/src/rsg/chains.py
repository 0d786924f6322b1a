"""Chains witnessing generated congruences, their pulldown into R, bounded
saturation of the projection congruence, and the proper-cover pipeline."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable

from . import words as W
from .actions import FreeGroupTreeAction, NiceAction, Tree, enumerate_subtrees, neighbours, tree_act, tree_meet
from .algebra import (
    FinRestrictionAlgebra,
    RestrictionAlgebra,
    UnionFind,
    check_associativity,
    check_identities,
)
from .errors import ArityError, DomainError, InstanceError
from .free import FreeRestrictionMonoid, evaluate_morphism
from .sampling import grow_tree, random_r, random_sd, random_tree, random_word
from .semidirect import SDElement, SemidirectProduct, in_R
from .terms import Sandwich, Term, Tower, two_transform


@dataclass
class Link:
    term: Term
    consts: list
    c: object
    d: object


@dataclass
class Chain:
    s: object
    t: object
    links: list[Link] = field(default_factory=list)

    def __len__(self):
        return len(self.links)


def chain_values(ch: Chain, alg: RestrictionAlgebra) -> list[tuple[object, object]]:
    out = []
    for i, ln in enumerate(ch.links):
        if len(ln.consts) != ln.term.arity:
            raise ArityError(f"link {i}: {ln.term.pretty()} takes {ln.term.arity} constants, got {len(ln.consts)}")
        out.append((ln.term.evaluate(alg, ln.c, ln.consts), ln.term.evaluate(alg, ln.d, ln.consts)))
    return out


def first_broken_link(ch: Chain, alg: RestrictionAlgebra) -> int | None:
    """Index of the first failing equality, or None.

    Index i < len(ch) refers to the equality on the left of link i (the start
    for i = 0); index len(ch) is the final equality with the endpoint t.
    """
    vals = chain_values(ch, alg)
    if not vals:
        return None if alg.eq(ch.s, ch.t) else 0
    prev = ch.s
    for i, (vc, vd) in enumerate(vals):
        if not alg.eq(prev, vc):
            return i
        prev = vd
    return None if alg.eq(prev, ch.t) else len(vals)


def verify_chain(ch: Chain, alg: RestrictionAlgebra, relation: Callable[[object, object], bool] | None = None) -> bool:
    if first_broken_link(ch, alg) is not None:
        return False
    if relation is not None:
        return all(relation(ln.c, ln.d) for ln in ch.links)
    return True


def transform_chain(action: NiceAction, ch: Chain) -> Chain:
    """Replace every link by its two_transform image; endpoints must lie in R."""
    for name, x in (("s", ch.s), ("t", ch.t)):
        if not in_R(action, x):
            raise DomainError(f"endpoint {name} is not in R")
    links = []
    for i, ln in enumerate(ch.links):
        if not (in_R(action, ln.c) and in_R(action, ln.d)):
            raise DomainError(f"link {i}: generating pair is not in R")
        term, beta = two_transform(action, ln.term, ln.consts)
        links.append(Link(term, beta, ln.c, ln.d))
    return Chain(ch.s, ch.t, links)


def chain_in_R(action: NiceAction, ch: Chain) -> bool:
    return all(in_R(action, k) for ln in ch.links for k in ln.consts)


# --- random valid chains ----------------------------------------------------------


def _random_split(rng, w: str, k: int) -> list[str]:
    cuts = sorted(int(x) for x in rng.integers(0, len(w) + 1, size=k - 1))
    bounds = [0, *cuts, len(w)]
    return [w[bounds[i]:bounds[i + 1]] for i in range(k)]


def _r_with_second(rng, alphabet, a: str, max_size: int) -> SDElement:
    size = max(len(a) + 1, int(rng.integers(1, max_size + 1)))
    return SDElement(grow_tree(rng, alphabet, ["", a], size), a)


def _z_const(rng, alphabet, b: str, max_size: int) -> SDElement:
    # any tree through b̄, so that the value's second component lies in its tree
    root = random_word(rng, alphabet, 2)
    size = int(rng.integers(1, max_size + 1))
    return SDElement(grow_tree(rng, alphabet, [root, b], max(size, 1)), b)


def random_valid_chain(rng, alphabet: W.Alphabet, max_links: int = 4, max_size: int = 5, max_len: int = 3, max_depth: int = 2) -> Chain:
    """A chain in X⋊Ω* with endpoints and generating pairs in R.

    Shapes, middle constants and second components are fixed first, walking
    the chain left to right so that consecutive second components agree.  The
    y-constant trees are then chosen large enough to absorb every other
    contribution, which makes consecutive first components agree as well.
    """
    action = FreeGroupTreeAction(alphabet)
    S = SemidirectProduct(action)
    k = int(rng.integers(1, max_links + 1))
    plan = []  # (term, a, tower consts, z, c, d)
    w_prev = None
    for i in range(k):
        tower = None
        if rng.random() < 0.6:
            tower = Tower(int(rng.integers(0, max_depth + 1)), "+" if rng.random() < 0.5 else "*")
        term = Sandwich(tower)
        if tower is None:
            if w_prev is None:
                a, cw, b = (random_word(rng, alphabet, max_len, positive=True) for _ in range(3))
            else:
                a, cw, b = _random_split(rng, w_prev, 3)
            c = _r_with_second(rng, alphabet, cw, max_size)
            d = random_r(rng, alphabet, max_size, max_len)
        else:
            if w_prev is None:
                a, b = (random_word(rng, alphabet, max_len, positive=True) for _ in range(2))
            else:
                a, b = _random_split(rng, w_prev, 2)
            c = random_r(rng, alphabet, max_size, max_len)
            d = random_r(rng, alphabet, max_size, max_len)
        z = _z_const(rng, alphabet, b, max_size)
        tc = [random_sd(rng, alphabet, max_size, max_len) for _ in range(tower.arity)] if tower else []
        plan.append((term, a, tc, z, c, d))
        mid = d.second if tower is None else ""
        w_prev = a + mid + b

    def value(term, y, tc, z, x):
        return term.evaluate(S, x, [y, z, *tc])

    # H_j: first component of link j at c_j with the smallest possible y tree
    H = [value(term, SDElement(Tree(frozenset([a])), a), tc, z, c).first for term, a, tc, z, c, d in plan]
    A = random_tree(rng, alphabet, max_size)
    for h in H:
        A = tree_meet(A, h)
    links = []
    s = None
    for term, a, tc, z, c, d in plan:
        y = SDElement(A, a)
        consts = [y, z, *tc]
        if s is None:
            s = term.evaluate(S, c, consts)
        end = term.evaluate(S, d, consts)
        links.append(Link(term, consts, c, d))
        A = end.first
    return Chain(s, end, links)


# --- in-sigma -----------------------------------------------------------------------


def in_sigma_normalize(x: SDElement, y: SDElement, identity=""):
    """((A, 1), (B, 1)) when the second components agree, else None."""
    if x.second != y.second:
        return None
    return SDElement(x.first, identity), SDElement(y.first, identity)


# --- bounded saturation ---------------------------------------------------------------


@dataclass
class BoundedCongruence:
    bound: int
    universe: list[Tree]
    blocks: list[list[Tree]]
    stabilized: bool | None = None
    _block_of: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.blocks = sorted((sorted(b) for b in self.blocks), key=lambda b: b[0].sort_key())
        self._block_of = {x: i for i, b in enumerate(self.blocks) for x in b}

    def block_of(self, A: Tree) -> int:
        try:
            return self._block_of[A]
        except KeyError:
            raise DomainError(f"tree {A} is outside the bound {self.bound}") from None

    def related(self, A: Tree, B: Tree) -> bool:
        return self.block_of(A) == self.block_of(B)

    def contains(self, A: Tree) -> bool:
        return A in self._block_of

    def partition_key(self) -> frozenset:
        return frozenset(frozenset(b) for b in self.blocks)

    def restrict(self, bound: int) -> frozenset:
        return frozenset(
            frozenset(x for x in b if len(x) <= bound) for b in self.blocks if any(len(x) <= bound for x in b)
        )


def _extension_vertices(A: Tree, alphabet: W.Alphabet, budget: int) -> set[str]:
    """Vertices at distance 1..budget from A."""
    out: set[str] = set()
    layer = set(A.vertices)
    seen = set(A.vertices)
    for _ in range(budget):
        nxt = {w for v in layer for w in neighbours(v, alphabet) if w not in seen}
        seen |= nxt
        out |= nxt
        layer = nxt
    return out


def _saturate(universe: list[Tree], pairs, alphabet: W.Alphabet, bound: int) -> UnionFind:
    uf = UnionFind(universe)
    for a, b in pairs:
        uf.union(a, b)
    index = set(universe)
    # context images that do not depend on the class structure
    ctx: dict[Tree, list[tuple[object, Tree]]] = {}
    for x in universe:
        images = []
        for v in x.vertices:
            images.append((("m", v), x))
        for v in _extension_vertices(x, alphabet, bound - len(x)):
            images.append((("m", v), tree_meet(x, Tree(frozenset([v])))))
        for ch in alphabet.letters:
            if ch in x.vertices:
                images.append((("r", ch), tree_act(ch.swapcase(), x)))
        ctx[x] = [(k, y) for k, y in images if y in index]
    changed = True
    while changed:
        changed = False
        first: dict = {}
        for x in universe:
            r = uf.find(x)
            for key, y in ctx[x]:
                slot = (r, key)
                z = first.get(slot)
                if z is None:
                    first[slot] = y
                elif uf.union(z, y):
                    changed = True
    return uf


def saturate_epsilon(generators: Iterable[tuple[Tree, Tree]], bound: int, alphabet: W.Alphabet, check_stable: bool = True) -> BoundedCongruence:
    """Least equivalence on trees through ε with at most ``bound`` vertices
    that contains the generators and is closed under meeting with a vertex
    and under re-rooting at a common vertex, whenever the results stay within
    the bound.

    ``stabilized`` compares with the same closure at ``bound + 1`` restricted
    back to the bound.
    """
    gens = list(generators)
    for a, b in gens:
        for x in (a, b):
            if "" not in x.vertices:
                raise DomainError(f"generator tree {x} does not contain ε")
            if len(x) > bound:
                raise DomainError(f"generator tree {x} exceeds the bound {bound}")
    universe = enumerate_subtrees(alphabet, bound)
    uf = _saturate(universe, gens, alphabet, bound)
    result = BoundedCongruence(bound, universe, uf.classes())
    if check_stable:
        bigger = _saturate(enumerate_subtrees(alphabet, bound + 1), gens, alphabet, bound + 1)
        outer = BoundedCongruence(bound + 1, list(bigger.parent), bigger.classes())
        result.stabilized = outer.restrict(bound) == result.partition_key()
    return result


def brute_force_epsilon(generators, bound: int, alphabet: W.Alphabet) -> frozenset:
    """Naive pair-set fixpoint: meet with every tree and translate by every
    group element, keeping results inside the bound.  Small instances only."""
    universe = enumerate_subtrees(alphabet, bound)
    index = set(universe)
    others = [t for k in range(1, bound + 1) for t in _all_trees_near(alphabet, bound, k)]
    rel = {(x, x) for x in universe}
    for a, b in generators:
        rel |= {(a, b), (b, a)}
    while True:
        new = set(rel)
        for x, y in rel:
            for C in others:
                p, q = tree_meet(x, C), tree_meet(y, C)
                if p in index and q in index:
                    new.add((p, q))
            for v in x.vertices & y.vertices:
                new.add((tree_act(W.invert(v), x), tree_act(W.invert(v), y)))
        for (x, y), (y2, z) in itertools.product(list(new), repeat=2):
            if y == y2:
                new.add((x, z))
        if new == rel:
            break
        rel = new
    uf = UnionFind(universe)
    for x, y in rel:
        uf.union(x, y)
    return BoundedCongruence(bound, universe, uf.classes()).partition_key()


def _all_trees_near(alphabet, bound, size):
    """Every tree of the given size within distance ``bound`` of ε."""
    out = set()
    for root in W.enumerate_reduced(alphabet, bound - 1):
        for t in enumerate_subtrees(alphabet, size, root):
            if len(t) == size and all(len(v) < bound for v in t.vertices):
                out.add(t)
    return sorted(out)


# --- proper cover pipeline -------------------------------------------------------------


def with_identity(S: FinRestrictionAlgebra) -> tuple[FinRestrictionAlgebra, bool]:
    """S itself when it has an identity, otherwise S with one adjoined."""
    if S.identity is not None:
        return S, False
    n = S.n
    mul = [row[:] + [i] for i, row in enumerate(S.table)] + [list(range(n)) + [n]]
    return FinRestrictionAlgebra(mul, S.plus_map + [n], S.star_map + [n], S.names + ["1"]), True


def validate_input_algebra(S: FinRestrictionAlgebra) -> None:
    if check_associativity(S) is not None or not check_identities(S).ok:
        raise InstanceError("input algebra is not a restriction semigroup")


@dataclass
class CoverReport:
    omega: dict[str, str]
    bound: int
    identity_adjoined: bool
    rho_p_pairs: int
    epsilon: BoundedCongruence
    fragment_size: int
    checks: dict[str, bool]
    details: dict = field(default_factory=dict)

    @property
    def stabilized(self) -> bool:
        return bool(self.epsilon.stabilized)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def as_dict(self, S: FinRestrictionAlgebra) -> dict:
        img = self.details.get("block_images", [])
        return {
            "omega": self.omega,
            "bound": self.bound,
            "identity_adjoined": self.identity_adjoined,
            "rho_p_pairs": self.rho_p_pairs,
            "epsilon_blocks": [
                {"image": img[i] if i < len(img) else None, "size": len(b), "trees": [str(t) for t in b]}
                for i, b in enumerate(self.epsilon.blocks)
            ],
            "fragment_size": self.fragment_size,
            "stabilized": self.stabilized,
            "checks": self.checks,
            "ok": self.ok,
        }


def build_proper_cover(S: FinRestrictionAlgebra, bound: int) -> CoverReport:
    validate_input_algebra(S)
    S1, adjoined = with_identity(S)
    if S.n > 26:
        raise InstanceError("at most 26 elements are supported (one letter each)")
    alphabet = W.Alphabet.first(S.n)
    assignment = {ch: i for i, ch in enumerate(alphabet.symbols)}
    fr = FreeRestrictionMonoid(alphabet)
    phi = {x: evaluate_morphism(x, S1, assignment) for x in fr.elements_upto(bound)}

    # generating pairs of the projection part of ker φ
    by_image: dict[int, list[Tree]] = {}
    for x, v in phi.items():
        if x.second == "":
            by_image.setdefault(v, []).append(x.first)
    pairs = [(ts[0], t) for ts in by_image.values() for t in ts[1:]]
    eps = saturate_epsilon(pairs, bound, alphabet)

    def cls(x: SDElement):
        return (eps.block_of(x.first), x.second)

    checks: dict[str, bool] = {}
    # (a) the induced map on classes is well defined and a morphism
    image_of: dict = {}
    well_defined = True
    for x, v in phi.items():
        key = cls(x)
        if image_of.setdefault(key, v) != v:
            well_defined = False
    morphism = True
    elems = list(phi)
    for x in elems:
        # x+ and x* keep the tree size, so both stay inside the fragment
        if phi[fr.plus(x)] != S1.plus(phi[x]) or phi[fr.star(x)] != S1.star(phi[x]):
            morphism = False
    for x in elems:
        px = phi[x]
        for y in elems:
            z = fr.mul(x, y)
            if len(z.first) <= bound and phi[z] != S1.mul(px, phi[y]):
                morphism = False
                break
        if not morphism:
            break
    checks["morphism"] = well_defined and morphism

    # (b) distinct projection classes have distinct images
    block_images: list = [None] * len(eps.blocks)
    separating = True
    for A in eps.universe:
        i = eps.block_of(A)
        v = phi[SDElement(A, "")]
        if block_images[i] is None:
            block_images[i] = v
        elif block_images[i] != v:
            separating = False
    if len(set(block_images)) != len(block_images):
        separating = False
    checks["projection_separating"] = separating

    # (c) properness of the fragment: x+ = y+ or x* = y*, with equal seconds, forces x = y
    proper = True
    seen_plus: dict = {}
    seen_star: dict = {}
    for x in elems:
        c = cls(x)
        k1 = (eps.block_of(x.first), x.second)
        if seen_plus.setdefault(k1, c) != c:
            proper = False
        rerooted = tree_act(W.invert(x.second), x.first)
        if rerooted in eps._block_of:
            k2 = (eps.block_of(rerooted), x.second)
            if seen_star.setdefault(k2, c) != c:
                proper = False
    checks["proper"] = proper
    checks["stabilized"] = bool(eps.stabilized)

    return CoverReport(
        omega={ch: S.names[i] for ch, i in assignment.items()},
        bound=bound,
        identity_adjoined=adjoined,
        rho_p_pairs=len(pairs),
        epsilon=eps,
        fragment_size=len({cls(x) for x in elems}),
        checks=checks,
        details={"block_images": [S1.names[v] for v in block_images]},
    )
