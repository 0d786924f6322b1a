"""The nine acceptance criteria, each at its full stated size.

Every test records one PASS/FAIL line; the lines are printed together at the
end of the pytest run.
"""
import time

from rsg.algebra import FinRestrictionAlgebra
from rsg.chains import build_proper_cover
from rsg.verify import Config, run_suite

CFG = Config(seed=2024, samples=50, omega=2, bound=4, triples=10_000, instances=100, chains=1000, nice_len=10)


def _check(criterion, number, title, results, limit=None):
    elapsed = sum(r.elapsed for r in results)
    ok = all(r.ok for r in results) and (limit is None or elapsed < limit)
    stats = "; ".join(f"{r.name}: {r.stats.get('failures', 0)} failure(s)" for r in results)
    budget = f", limit {limit}s" if limit else ""
    criterion(number, title, ok, f"{elapsed:.1f}s{budget}; {stats}")
    for r in results:
        assert r.ok, f"{r.name}: {r.failures[:5]}"
    if limit is not None:
        assert elapsed < limit, f"took {elapsed:.1f}s"


def test_1_identities(criterion):
    _check(criterion, 1, "restriction identities on every constructed algebra", [run_suite("identities", CFG)], limit=30)


def test_2_niceness(criterion):
    _check(criterion, 2, "nice factorizations (free group, free abelian)", [run_suite("niceness", CFG)], limit=60)


def test_3_onedir(criterion):
    _check(criterion, 3, "one-directional form of tower terms", [run_suite("lemma-onedir", CFG)])


def test_4_yuck(criterion):
    _check(criterion, 4, "tower construction with constants in R", [run_suite("lemma-yuck", CFG)])


def test_5_chains(criterion):
    _check(criterion, 5, "chain transformation into R", [run_suite("lemma-two", CFG), run_suite("main1", CFG)], limit=120)


def test_6_oracles(criterion):
    _check(criterion, 6, "fast routines agree with brute-force oracles", [run_suite("oracles", CFG)])


def test_7_cover(criterion):
    instances = {"trivial": FinRestrictionAlgebra.trivial(), "chain2": FinRestrictionAlgebra.chain(2), "chain3": FinRestrictionAlgebra.chain(3)}
    ok, parts, problems = True, [], []
    for name, S in instances.items():
        t0 = time.perf_counter()
        rep = build_proper_cover(S, 4)
        dt = time.perf_counter() - t0
        good = rep.ok and rep.stabilized and dt < 120
        ok &= good
        parts.append(f"{name} {dt:.1f}s")
        if not good:
            problems.append((name, rep.checks, dt))
    criterion(7, "proper cover pipeline at bound 4", ok, ", ".join(parts))
    assert not problems, problems


def test_8_partial(criterion):
    _check(criterion, 8, "partial actions: M_g, prefix criterion, M = R, greatest σ-elements", [run_suite("partial", CFG)])


def test_9_factorisable(criterion):
    _check(criterion, 9, "completions are factorisable and split as image + units", [run_suite("factorisable", CFG)])
