"""Property suites.  The CLI ``verify`` command and the acceptance tests both
run these; each suite only touches the module it is named after."""
from __future__ import annotations

import itertools
import time
from dataclasses import asdict, dataclass, field
from typing import Callable

from . import words as W
from .actions import (
    FreeAbelianAction,
    FreeGroupTreeAction,
    GroupItself,
    Tree,
    minclosed_span,
    span,
    tree_meet,
    verify_nice_factorization,
)
from .algebra import (
    FinRestrictionAlgebra,
    RestrictionAlgebra,
    check_associativity,
    check_identities,
    finite_congruence_closure,
    is_factorisable,
)
from .chains import (
    brute_force_epsilon,
    build_proper_cover,
    chain_in_R,
    random_valid_chain,
    saturate_epsilon,
    transform_chain,
    verify_chain,
)
from .corpus import completions, diamond, non_inverse_example, small_algebras, symmetric_inverse_monoid
from .free import FreeRestrictionMonoid
from .oracles import congruence_oracle, meet_oracle, minclosed_oracle, span_geodesics, span_pruning
from .partial import (
    ChiAction,
    MAlgebra,
    chain_example,
    check_m_equals_R,
    check_mg_identity,
    check_prefix_criterion,
    diamond_example,
    greatest_in_sigma_classes,
)
from .sampling import make_rng, random_abelian, random_r, random_sd, random_word, random_x
from .semidirect import SemidirectProduct, in_R
from .terms import Sandwich, Tower, onedir_params, onedir_value, two_transform, yuck_construct


@dataclass
class Config:
    seed: int = 0
    samples: int = 50  # c-samples per instance
    omega: int = 2
    bound: int = 4
    triples: int = 10_000
    instances: int = 100
    chains: int = 1000
    nice_len: int = 10


@dataclass
class SuiteResult:
    name: str
    ok: bool
    stats: dict = field(default_factory=dict)
    failures: list[str] = field(default_factory=list)
    elapsed: float = 0.0

    def as_dict(self) -> dict:
        d = asdict(self)
        d["elapsed"] = round(self.elapsed, 3)
        return d

    def line(self) -> str:
        return f"{'PASS' if self.ok else 'FAIL'} {self.name} {self.stats}"


class _Collector:
    def __init__(self, cap: int = 20):
        self.failures: list[str] = []
        self.count = 0
        self.cap = cap

    def fail(self, msg: str) -> None:
        self.count += 1
        if len(self.failures) < self.cap:
            self.failures.append(msg)


def _timed(name: str, body: Callable[[Config, _Collector, dict], None]):
    def run(cfg: Config) -> SuiteResult:
        col, stats = _Collector(), {}
        t0 = time.perf_counter()
        body(cfg, col, stats)
        stats["failures"] = col.count
        return SuiteResult(name, col.count == 0, stats, col.failures, time.perf_counter() - t0)

    run.__name__ = name
    return run


# --- identities -------------------------------------------------------------------


def _check_sampled(alg: RestrictionAlgebra, draw, n: int, col: _Collector, label: str) -> None:
    triples = [(draw(), draw(), draw()) for _ in range(n)]
    rep = check_identities(alg, triples)
    for f in rep.failures():
        col.fail(f"{label}: {f.name} at {[alg.format(w) for w in f.witness]}")
    bad = check_associativity(alg, triples)
    if bad is not None:
        col.fail(f"{label}: associativity at {[alg.format(w) for w in bad]}")


def _check_exhaustive(alg: FinRestrictionAlgebra, col: _Collector, label: str) -> None:
    rep = check_identities(alg)
    for f in rep.failures():
        col.fail(f"{label}: {f.name} at {[alg.format(w) for w in f.witness]}")
    bad = check_associativity(alg)
    if bad is not None:
        col.fail(f"{label}: associativity at {[alg.format(w) for w in bad]}")


def _identities(cfg: Config, col: _Collector, stats: dict) -> None:
    rng = make_rng(cfg.seed)
    al = W.Alphabet.first(cfg.omega)
    act = FreeGroupTreeAction(al)
    n = cfg.triples
    sampled = [
        ("X⋊Ω*", SemidirectProduct(act), lambda: random_sd(rng, al, 4, 3)),
        ("X⋊FG", SemidirectProduct(act, group=True), lambda: random_sd(rng, al, 4, 3, group=True)),
        ("FR", FreeRestrictionMonoid(al), lambda: random_r(rng, al, 4, 3)),
    ]
    for pa_name, pa in (("chain", chain_example()), ("diamond", diamond_example())):
        M = MAlgebra(pa)
        frag = M.fragment(4)
        sampled.append((f"M({pa_name})", M, lambda frag=frag: frag[int(rng.integers(len(frag)))]))
    for label, alg, draw in sampled:
        _check_sampled(alg, draw, n, col, label)
    finite = [("I2", symmetric_inverse_monoid(2)), ("diamond", diamond()), ("chain2-idem", non_inverse_example())]
    finite += [(f"completion-{name}", c.F) for name, c in completions()]
    for label, S in finite:
        _check_exhaustive(S, col, label)
    stats.update(sampled=len(sampled), triples_each=n, finite=len(finite))


identities = _timed("identities", _identities)


# --- niceness ---------------------------------------------------------------------


def _niceness(cfg: Config, col: _Collector, stats: dict) -> None:
    al = W.Alphabet.first(cfg.omega)
    act = FreeGroupTreeAction(al)
    count = 0
    for g in W.enumerate_reduced(al, cfg.nice_len):
        count += 1
        if not verify_nice_factorization(act, g):
            col.fail(f"free group: {W.pretty_word(g)}")
    rng = make_rng(cfg.seed)
    ab = FreeAbelianAction(W.Alphabet("xy"))
    for _ in range(cfg.triples):
        g = random_abelian(rng, ab.alphabet.symbols)
        if not verify_nice_factorization(ab, g):
            col.fail(f"free abelian: {g}")
    grp = GroupItself(act)
    for g in itertools.islice(W.enumerate_reduced(al, 4), 200):
        if not verify_nice_factorization(grp, g):
            col.fail(f"group itself: {W.pretty_word(g)}")
    stats.update(free_words=count, abelian=cfg.triples)


niceness = _timed("niceness", _niceness)


# --- lemmas ---------------------------------------------------------------------------


def _onedir(cfg: Config, col: _Collector, stats: dict) -> None:
    rng = make_rng(cfg.seed)
    al = W.Alphabet.first(cfg.omega)
    act = FreeGroupTreeAction(al)
    G = SemidirectProduct(act, group=True)
    evals = 0
    for depth in range(4):
        for inner in "+*":
            t = Tower(depth, inner)
            for _ in range(cfg.instances):
                alpha = [random_sd(rng, al, 5, 4) for _ in range(t.arity)]
                U, V, g = onedir_params(act, t, alpha)
                for _ in range(cfg.samples):
                    c = random_r(rng, al, 5, 3)
                    evals += 1
                    if t.evaluate(G, c, alpha) != onedir_value(act, U, V, g, c, inner):
                        col.fail(f"{t.pretty()} alpha={alpha} c={c}")
    stats.update(terms=8, evaluations=evals)


lemma_onedir = _timed("lemma-onedir", _onedir)


def _yuck(cfg: Config, col: _Collector, stats: dict) -> None:
    rng = make_rng(cfg.seed)
    al = W.Alphabet.first(cfg.omega)
    act = FreeGroupTreeAction(al)
    S = SemidirectProduct(act)
    evals = 0
    for variant in "+*":
        for _ in range(cfg.instances):
            U, V = random_x(rng, al, 5), random_x(rng, al, 5)
            g = W.reduce(random_word(rng, al, 6))
            t, beta = yuck_construct(act, U, V, g, variant)
            if not all(in_R(act, b) for b in beta):
                col.fail(f"β outside R for U={U} V={V} g={g}")
            if t.family != variant:
                col.fail(f"wrong family for g={g}")
            for _ in range(cfg.samples):
                c = random_r(rng, al, 5, 3)
                evals += 1
                if t.evaluate(S, c, beta) != onedir_value(act, U, V, g, c, variant, with_one=True):
                    col.fail(f"variant {variant} U={U} V={V} g={g} c={c}")
    stats.update(instances=2 * cfg.instances, evaluations=evals)


lemma_yuck = _timed("lemma-yuck", _yuck)


def _two(cfg: Config, col: _Collector, stats: dict) -> None:
    rng = make_rng(cfg.seed)
    al = W.Alphabet.first(cfg.omega)
    act = FreeGroupTreeAction(al)
    S = SemidirectProduct(act)
    shapes = [Sandwich()] + [Sandwich(Tower(d, op)) for d in range(4) for op in "+*"]
    evals = 0
    for t in shapes:
        for _ in range(cfg.instances // 4 or 1):
            alpha = [random_sd(rng, al, 5, 3) for _ in range(t.arity)]
            t2, beta = two_transform(act, t, alpha)
            if not all(in_R(act, b) for b in beta):
                col.fail(f"β outside R for {t.pretty()}")
            for _ in range(cfg.samples):
                c = random_r(rng, al, 5, 3)
                evals += 1
                if S.down(t.evaluate(S, c, alpha)) != t2.evaluate(S, c, beta):
                    col.fail(f"{t.pretty()} alpha={alpha} c={c}")
    stats.update(shapes=len(shapes), evaluations=evals)


lemma_two = _timed("lemma-two", _two)


def _main1(cfg: Config, col: _Collector, stats: dict) -> None:
    rng = make_rng(cfg.seed)
    al = W.Alphabet.first(cfg.omega)
    act = FreeGroupTreeAction(al)
    S = SemidirectProduct(act)
    lengths = [0] * 5
    for i in range(cfg.chains):
        ch = random_valid_chain(rng, al)
        lengths[len(ch)] += 1
        if not verify_chain(ch, S):
            col.fail(f"chain {i}: generator produced an invalid chain")
            continue
        out = transform_chain(act, ch)
        if not (verify_chain(out, S) and chain_in_R(act, out) and out.s == ch.s and out.t == ch.t and len(out) == len(ch)):
            col.fail(f"chain {i}: transformed chain rejected")
    stats.update(chains=cfg.chains, by_length=lengths[1:])


main1 = _timed("main1", _main1)


# --- oracles --------------------------------------------------------------------------------


def _oracles(cfg: Config, col: _Collector, stats: dict) -> None:
    rng = make_rng(cfg.seed)
    counts = {}
    # span: every set of ≤ 5 words up to length 2 over two letters, every pair
    # of words up to length 4, and sampled 5-sets up to length 4
    al = W.Alphabet.first(2)
    short = list(W.enumerate_reduced(al, 2))
    longw = list(W.enumerate_reduced(al, 4))
    sets = [s for k in range(1, 6) for s in itertools.combinations(short, k)]
    sets += list(itertools.combinations(longw, 2))
    sets += [tuple(longw[int(i)] for i in rng.choice(len(longw), 5, replace=False)) for _ in range(2000)]
    n_short = sum(1 for s in sets if max(map(len, s)) <= 2)
    for i, s in enumerate(sets):
        fast = span(s).vertices
        if fast != span_geodesics(s):
            col.fail(f"span {s}")
        # the pruning oracle works inside a ball, so only short sets and a subsample of long ones
        if (max(map(len, s)) <= 2 or i % 200 == 0) and fast != span_pruning(s, al):
            col.fail(f"span (pruning) {s}")
    counts["span_sets"] = len(sets)
    counts["span_short_sets"] = n_short
    # meet: pairs of trees spanned from short words
    trees = sorted({span(s) for s in itertools.combinations(short, 2)})
    for A, B in itertools.product(trees, repeat=2):
        if tree_meet(A, B).vertices != meet_oracle(A, B):
            col.fail(f"meet {A} {B}")
    counts["meet_pairs"] = len(trees) ** 2
    # min-closed span: every subset of size ≤ 4 of [-2, 2]², plus sampled 5-subsets
    elems = list(W.abelian_elements("xy", -2, 2))
    msets = [s for k in range(1, 5) for s in itertools.combinations(elems, k)]
    msets += [tuple(elems[int(i)] for i in rng.choice(len(elems), 5, replace=False)) for _ in range(5000)]
    for s in msets:
        if minclosed_span(s).elements != minclosed_oracle(s):
            col.fail(f"minclosed {[str(x) for x in s]}")
    counts["minclosed_sets"] = len(msets)
    # congruence closure: every algebra in the corpus, every set of ≤ 3 pairs
    ncong = 0
    for name, S in small_algebras():
        pairs = list(itertools.combinations(range(S.n), 2))
        for k in range(0, 4):
            for gen in itertools.combinations(pairs, k):
                ncong += 1
                if finite_congruence_closure(S, gen) != congruence_oracle(S, gen):
                    col.fail(f"congruence {name} {gen}")
    counts["congruence_cases"] = ncong
    # bounded saturation against brute force on tiny instances
    a1 = W.Alphabet("a")
    gen = [(Tree(frozenset([""])), Tree(frozenset(["", "a"])))]
    for N in (2, 3, 4):
        if saturate_epsilon(gen, N, a1, check_stable=False).partition_key() != brute_force_epsilon(gen, N, a1):
            col.fail(f"epsilon Ω={{a}} N={N}")
    counts["epsilon_cases"] = 3
    stats.update(counts)


oracles = _timed("oracles", _oracles)


# --- cover, partial actions, factorisability ------------------------------------------------


def _cover(cfg: Config, col: _Collector, stats: dict) -> None:
    from .algebra import FinRestrictionAlgebra as F

    runs = {}
    for name, S in (("trivial", F.trivial()), ("chain2", F.chain(2)), ("chain3", F.chain(3))):
        rep = build_proper_cover(S, cfg.bound)
        runs[name] = dict(rep.checks)
        for k, v in rep.checks.items():
            if not v:
                col.fail(f"{name}: {k}")
    stats.update(runs)


cover = _timed("cover", _cover)


def partial_action_checks(pa, max_len: int = 4, prefix_len: int = 3) -> tuple[list[str], dict]:
    """Every check the partial-action suite runs, on one instance."""
    out = []
    for g in check_mg_identity(pa, max_len):
        out.append(f"M_g identity fails at {W.pretty_word(g)}")
    rep = check_prefix_criterion(pa, prefix_len)
    for g, h in rep.violations + rep.mismatches:
        out.append(f"prefix criterion at g={W.pretty_word(g)} h={W.pretty_word(h)}")
    for k, v in check_m_equals_R(pa, prefix_len).items():
        if not v:
            out.append(f"M vs R: {k}")
    for t in greatest_in_sigma_classes(MAlgebra(pa), max_len):
        out.append(f"σ-class of {W.format_word(t)} has no greatest (M_t, t)")
    act = ChiAction(pa)
    for g in W.enumerate_reduced(pa.alphabet, max_len):
        if not verify_nice_factorization(act, g):
            out.append(f"factorization of {W.pretty_word(g)} not nice on χ̄-classes")
    return out, {"prefix_pairs": rep.checked, "bottomless": len(rep.bottomless)}


def _partial(cfg: Config, col: _Collector, stats: dict) -> None:
    for name, pa in (("chain", chain_example()), ("diamond", diamond_example())):
        fails, st = partial_action_checks(pa)
        for f in fails:
            col.fail(f"{name}: {f}")
        stats[name] = st


partial = _timed("partial", _partial)


def _factorisable(cfg: Config, col: _Collector, stats: dict) -> None:
    for name, c in completions():
        if not is_factorisable(c.F):
            col.fail(f"{name}: F ≠ P(F)U(F)")
        rest = sorted(set(range(c.F.n)) - set(c.units))
        if sorted(c.embedding) != rest or len(set(c.embedding)) != len(c.embedding):
            col.fail(f"{name}: image of the old algebra is not F∖U(F)")
        if set(c.units) != {u for u in range(c.F.n) if c.F.plus(u) == c.F.identity == c.F.star(u)}:
            col.fail(f"{name}: U(F) differs from the adjoined classes")
        stats[name] = {"F": c.F.n, "units": len(c.units)}


factorisable = _timed("factorisable", _factorisable)


SUITES: dict[str, Callable[[Config], SuiteResult]] = {
    "identities": identities,
    "niceness": niceness,
    "lemma-onedir": lemma_onedir,
    "lemma-yuck": lemma_yuck,
    "lemma-two": lemma_two,
    "main1": main1,
    "oracles": oracles,
    "cover": cover,
    "partial": partial,
    "factorisable": factorisable,
}


def run_suite(name: str, cfg: Config) -> SuiteResult:
    return SUITES[name](cfg)
