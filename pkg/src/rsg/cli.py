"""``rsg`` command-line front end.

Exit status: 0 on success, 1 when a verification fails, 2 on bad input.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import words as W
from .actions import FreeGroupTreeAction, Tree
from .algebra import FinRestrictionAlgebra, check_associativity, check_identities, finite_congruence_closure, quotient_finite
from .chains import Chain, Link, build_proper_cover, chain_in_R, first_broken_link, random_valid_chain, transform_chain, verify_chain
from .errors import RsgError
from .free import FreeRestrictionMonoid, decompose, evaluate_morphism, parse_assignment
from .partial import ChiAction, PartialAction, chi_class, chi_meet
from .sampling import make_rng
from .semidirect import SemidirectProduct, down, format_sd, in_R, parse_sd
from .terms import Tower, onedir_params, parse_term, two_transform, yuck_construct
from .verify import SUITES, Config, partial_action_checks, run_suite


class InputError(Exception):
    """Bad input detected by the CLI itself (maps to exit status 2)."""


@dataclass
class Session:
    alphabet: W.Alphabet
    config: Config
    algebras: dict[str, FinRestrictionAlgebra] = field(default_factory=dict)

    def load_algebra(self, path: str) -> FinRestrictionAlgebra:
        if path not in self.algebras:
            S = _read_algebra(path)
            if check_associativity(S) is not None or not check_identities(S).ok:
                raise InputError(f"{path}: not a restriction semigroup (run `rsg alg check` for details)")
            self.algebras[path] = S
        return self.algebras[path]


def _read_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}") from None


def _read_algebra(path: str) -> FinRestrictionAlgebra:
    try:
        return FinRestrictionAlgebra.from_json_obj(_read_json(path))
    except (KeyError, TypeError, IndexError) as exc:
        raise InputError(f"{path}: malformed algebra ({exc})") from None


def _lines(items: list[str]) -> list[str]:
    if items:
        return items
    return [ln.strip() for ln in sys.stdin if ln.strip()]


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False, sort_keys=True)


class Out:
    """Collect human lines and a JSON payload; print whichever was asked for."""

    def __init__(self, as_json: bool):
        self.as_json = as_json
        self.lines: list[str] = []
        self.data: dict = {}

    def line(self, text: str = "") -> None:
        self.lines.append(text)

    def flush(self) -> None:
        if self.as_json:
            print(_dump(self.data))
        elif self.lines:
            print("\n".join(self.lines))


# --- word / tree ------------------------------------------------------------------


def cmd_word(args, ses: Session, out: Out) -> int:
    results = []
    for text in _lines(args.items):
        if args.op == "reduce":
            r = W.format_word(W.parse_word(text, ses.alphabet))
        elif args.op == "nicefact":
            r = " ".join(W.pretty_word(w) for w in W.nice_factorization_free(W.parse_word(text, ses.alphabet)))
        else:
            u, t = W.abelian_normal_form(W.parse_abelian(text))
            one = W.AbelianElement()
            r = str(t) if u == one else f"({u})^-1" + ("" if t == one else f" {t}")
        results.append({"input": text, "output": r})
        out.line(r)
    out.data = {"results": results}
    return 0


def cmd_tree(args, ses: Session, out: Out) -> int:
    T = Tree.parse(args.tree, ses.alphabet)
    out.as_json = False  # DOT always goes to stdout as is
    out.line(T.to_dot(args.name))
    return 0


# --- finite algebras --------------------------------------------------------------------


def _pairs(S: FinRestrictionAlgebra, text: str) -> list[tuple[int, int]]:
    pairs = []
    for part in filter(None, (p.strip() for p in text.split(","))):
        if "=" not in part:
            raise InputError(f"expected x=y in --pairs, got {part!r}")
        a, b = (s.strip() for s in part.split("=", 1))
        pairs.append((_element(S, a), _element(S, b)))
    return pairs


def _element(S: FinRestrictionAlgebra, text: str) -> int:
    """An element by name, or by index when no element has that name."""
    if text in S.names or not text.isdigit():
        return S.index(text)
    i = int(text)
    if i >= S.n:
        raise InputError(f"element index {i} out of range")
    return i


def cmd_alg(args, ses: Session, out: Out) -> int:
    if args.op == "check":
        S = _read_algebra(args.input)
        rep = check_identities(S)
        assoc = check_associativity(S)
        out.data = {"elements": S.n, "identities": rep.as_dict(S.format), "associative": assoc is None, "ok": rep.ok and assoc is None}
        for r in rep.results:
            out.line(f"{'ok  ' if r.passed else 'FAIL'} {r.name}" + ("" if r.passed else f"  at {[S.format(w) for w in r.witness]}"))
        out.line(f"{'ok  ' if assoc is None else 'FAIL'} associativity" + ("" if assoc is None else f"  at {[S.format(w) for w in assoc]}"))
        return 0 if out.data["ok"] else 1
    S = ses.load_algebra(args.input)
    rho = finite_congruence_closure(S, _pairs(S, args.pairs))
    blocks = [[S.names[i] for i in b] for b in rho.blocks]
    if args.op == "closure":
        out.data = {"blocks": blocks}
        for b in blocks:
            out.line("{" + ", ".join(b) + "}")
        return 0
    Q = quotient_finite(S, rho)
    out.data = Q.to_json_obj()
    out.as_json = True  # the quotient is itself an algebra file
    return 0


# --- semidirect products and the free object ------------------------------------------------


def cmd_sd(args, ses: Session, out: Out) -> int:
    act = FreeGroupTreeAction(ses.alphabet)
    S = SemidirectProduct(act, group=args.group)
    xs = [parse_sd(t, ses.alphabet) for t in args.elements]
    need = 2 if args.op == "mul" else 1
    if len(xs) != need:
        raise InputError(f"sd {args.op} takes {need} element(s), got {len(xs)}")
    for x in xs:
        if not S.contains(x):
            raise InputError(f"{format_sd(x)} is not an element of the {'group' if args.group else 'monoid'} product")
    if args.op == "inR":
        val = in_R(act, xs[0])
        out.data = {"inR": val}
        out.line("true" if val else "false")
        return 0
    r = {"mul": lambda: S.mul(*xs), "plus": lambda: S.plus(xs[0]), "star": lambda: S.star(xs[0]), "down": lambda: down(act, xs[0])}[args.op]()
    out.data = {"result": format_sd(r)}
    out.line(format_sd(r))
    return 0


def cmd_fr(args, ses: Session, out: Out) -> int:
    fr = FreeRestrictionMonoid(ses.alphabet)
    xs = [fr.check(parse_sd(t, ses.alphabet)) for t in args.elements]
    if args.op == "decompose":
        terms = [str(decompose(x)) for x in xs]
        out.data = {"terms": terms}
        out.lines += terms
        return 0
    if not args.target or args.map is None:
        raise InputError("fr eval needs --target and --map")
    S = ses.load_algebra(args.target)
    assignment = parse_assignment(args.map, lambda v: _element(S, v))
    missing = sorted({ch.lower() for x in xs for v in x.first.vertices for ch in v} - set(assignment))
    if missing:
        raise InputError(f"--map gives no value for {', '.join(missing)}")
    vals = [S.names[evaluate_morphism(x, S, assignment)] for x in xs]
    out.data = {"values": vals}
    out.lines += vals
    return 0


# --- terms and chains ------------------------------------------------------------------------


def _consts(texts, ses) -> list:
    return [parse_sd(t, ses.alphabet) for t in texts or []]


def cmd_term(args, ses: Session, out: Out) -> int:
    act = FreeGroupTreeAction(ses.alphabet)
    if args.op == "yuck":
        if args.U is None or args.V is None:
            raise InputError("term yuck needs --U and --V")
        t, beta = yuck_construct(act, Tree.parse(args.U, ses.alphabet), Tree.parse(args.V, ses.alphabet), W.parse_word(args.g, ses.alphabet), args.variant)
        return _report_term(out, t, beta, act)
    t = parse_term(args.term)
    consts = _consts(args.consts, ses)
    if args.op == "eval":
        if args.c is None:
            raise InputError("term eval needs --c")
        S = SemidirectProduct(act, group=args.group)
        v = t.evaluate(S, parse_sd(args.c, ses.alphabet), consts)
        out.data = {"term": t.pretty(), "value": format_sd(v)}
        out.line(f"{t.pretty()} = {format_sd(v)}")
        return 0
    if args.op == "onedir":
        if not isinstance(t, Tower):
            raise InputError("term onedir needs a tower term")
        U, V, g = onedir_params(act, t, consts)
        out.data = {"term": t.pretty(), "U": str(U), "V": str(V), "g": W.format_word(g)}
        out.line(f"{t.pretty()}:  U = {U}  V = {V}  g = {W.format_word(g)}")
        return 0
    t2, beta = two_transform(act, t, consts)
    return _report_term(out, t2, beta, act)


def _report_term(out: Out, t, beta, act) -> int:
    ok = all(in_R(act, b) for b in beta)
    out.data = {"term": t.pretty(), "constants": [format_sd(b) for b in beta], "all_in_R": ok}
    out.line(t.pretty())
    for slot, b in zip(t.slots, beta):
        out.line(f"  {slot} = {format_sd(b)}")
    return 0 if ok else 1


def _chain_from_json(obj, ses: Session) -> Chain:
    try:
        links = [
            Link(parse_term(ln["term"]), _consts(ln["consts"], ses), parse_sd(ln["c"], ses.alphabet), parse_sd(ln["d"], ses.alphabet))
            for ln in obj["links"]
        ]
        return Chain(parse_sd(obj["s"], ses.alphabet), parse_sd(obj["t"], ses.alphabet), links)
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed chain ({exc})") from None


def _chain_json(ch: Chain) -> dict:
    return {
        "s": format_sd(ch.s),
        "t": format_sd(ch.t),
        "links": [{"term": ln.term.code, "pretty": ln.term.pretty(), "consts": [format_sd(k) for k in ln.consts], "c": format_sd(ln.c), "d": format_sd(ln.d)} for ln in ch.links],
    }


def cmd_chain(args, ses: Session, out: Out) -> int:
    act = FreeGroupTreeAction(ses.alphabet)
    S = SemidirectProduct(act)
    if args.input:
        chains = [_chain_from_json(_read_json(args.input), ses)]
    else:
        rng = make_rng(ses.config.seed)
        chains = [random_valid_chain(rng, ses.alphabet) for _ in range(args.count)]
    status, reports = 0, []
    for i, ch in enumerate(chains):
        broken = first_broken_link(ch, S)
        if broken is not None:
            raise InputError(f"chain {i}: link {broken} does not connect")
        new = transform_chain(act, ch)
        ok = verify_chain(new, S) and chain_in_R(act, new) and new.s == ch.s and new.t == ch.t
        status |= 0 if ok else 1
        reports.append({"input": _chain_json(ch), "output": _chain_json(new), "ok": ok})
        out.line(f"chain {i}: {len(ch)} link(s), {format_sd(ch.s)} ~ {format_sd(ch.t)}: {'PASS' if ok else 'FAIL'}")
        for ln in new.links:
            out.line(f"  {ln.term.pretty()}  [{', '.join(format_sd(k) for k in ln.consts)}]")
    out.data = {"chains": reports}
    return status


# --- covers, partial actions, verification ---------------------------------------------------


def cmd_cover(args, ses: Session, out: Out) -> int:
    S = ses.load_algebra(args.input)
    rep = build_proper_cover(S, ses.config.bound)
    out.data = rep.as_dict(S)
    out.line(f"S: {S.n} element(s); Ω = {', '.join(f'{k}->{v}' for k, v in rep.omega.items())}; bound {rep.bound}")
    out.line(f"fragment: {rep.fragment_size} projection tree(s), {rep.rho_p_pairs} generating pair(s), {len(rep.epsilon.blocks)} ε-block(s)")
    for k, v in rep.checks.items():
        out.line(f"{'ok  ' if v else 'FAIL'} {k}")
    return 0 if rep.ok else 1


def _load_pact(path: str) -> PartialAction:
    try:
        return PartialAction.from_json_obj(_read_json(path))
    except (KeyError, TypeError, IndexError) as exc:
        raise InputError(f"{path}: malformed partial action ({exc})") from None


def _chi(text: str, pa: PartialAction):
    if "," not in text:
        raise InputError(f"expected Y-name,word for a class, got {text!r}")
    name, word = (s.strip() for s in text.split(",", 1))
    return chi_class(pa, pa.Y.index(name), W.parse_word(word, pa.alphabet))


def cmd_pact(args, ses: Session, out: Out) -> int:
    pa = _load_pact(args.input)
    act = ChiAction(pa)
    if args.op == "check":
        fails, stats = partial_action_checks(pa, args.max_len, min(args.max_len, 3))
        out.data = {"ok": not fails, "failures": fails, **stats}
        out.lines += fails
        out.line(f"{'PASS' if not fails else 'FAIL'}: {stats['prefix_pairs']} prefix pair(s), {stats['bottomless']} bottomless word(s)")
        return 0 if not fails else 1
    if args.op == "meet":
        if args.x is None or args.y is None:
            raise InputError("pact meet needs --x and --y")
        r = chi_meet(pa, _chi(args.x, pa), _chi(args.y, pa))
        out.data = {"meet": act.format_x(r)}
        out.line(act.format_x(r))
        return 0
    from .actions import verify_nice_factorization

    bad = [W.format_word(g) for g in W.enumerate_reduced(pa.alphabet, args.max_len) if not verify_nice_factorization(act, g)]
    out.data = {"max_len": args.max_len, "not_nice": bad}
    out.line(f"{'PASS' if not bad else 'FAIL'}: factorizations up to length {args.max_len}" + (f"; not nice: {', '.join(bad)}" if bad else ""))
    return 0 if not bad else 1


def cmd_verify(args, ses: Session, out: Out) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    results = [run_suite(n, ses.config) for n in names]
    ok = all(r.ok for r in results)
    out.data = {"ok": ok, "suites": [{k: v for k, v in r.as_dict().items() if k != "elapsed"} for r in results]}
    for r in results:
        out.line(f"{'PASS' if r.ok else 'FAIL'} {r.name}  ({r.elapsed:.1f}s)  {json.dumps(r.stats, ensure_ascii=False, sort_keys=True)}")
        for f in r.failures:
            out.line(f"  {f}")
    return 0 if ok else 1


# --- parser ---------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for the random generator")
    common.add_argument("--samples", type=int, default=50, help="c-samples per instance")
    common.add_argument("--bound", type=int, default=4, help="tree-size bound for covers")
    common.add_argument("--omega", type=int, default=2, help="alphabet size (letters a, b, ...)")
    common.add_argument("--json", action="store_true", help="machine-readable output")

    p = argparse.ArgumentParser(prog="rsg", description="Exact restriction-semigroup computations.")
    sub = p.add_subparsers(dest="cmd", required=True)

    w = sub.add_parser("word", parents=[common], help="free-group words")
    w.add_argument("op", choices=["reduce", "nicefact", "abelian-nf"])
    w.add_argument("items", nargs="*", help="elements; read from stdin, one per line, if none")
    w.set_defaults(fn=cmd_word)

    t = sub.add_parser("tree", parents=[common], help="Cayley subtrees")
    t.add_argument("op", choices=["dot"])
    t.add_argument("tree", help="tree literal such as {ε,a,ab}")
    t.add_argument("--name", default="tree")
    t.set_defaults(fn=cmd_tree)

    a = sub.add_parser("alg", parents=[common], help="finite restriction algebras (JSON tables)")
    a.add_argument("op", choices=["check", "closure", "quotient"])
    a.add_argument("input", help="algebra JSON file")
    a.add_argument("--pairs", default="", help="generating pairs, e.g. e=f,a=b")
    a.set_defaults(fn=cmd_alg)

    s = sub.add_parser("sd", parents=[common], help="semidirect product X⋊Ω* (or X⋊FG with --group)")
    s.add_argument("op", choices=["mul", "plus", "star", "down", "inR"])
    s.add_argument("elements", nargs="+")
    s.add_argument("--group", action="store_true")
    s.set_defaults(fn=cmd_sd)

    f = sub.add_parser("fr", parents=[common], help="free restriction monoid")
    f.add_argument("op", choices=["decompose", "eval"])
    f.add_argument("elements", nargs="+")
    f.add_argument("--target", help="algebra JSON file")
    f.add_argument("--map", help="assignment such as a=3,b=e")
    f.set_defaults(fn=cmd_fr)

    m = sub.add_parser("term", parents=[common], help="terms of the chain family")
    m.add_argument("op", choices=["eval", "onedir", "yuck", "two"])
    m.add_argument("term", nargs="?", default="yxz", help="yxz, tower:<i><op> or sandwich:<i><op>")
    m.add_argument("--consts", nargs="*", help="constant elements, in slot order")
    m.add_argument("--c", help="argument element")
    m.add_argument("--U")
    m.add_argument("--V")
    m.add_argument("--g", default="ε")
    m.add_argument("--variant", choices=["+", "*"], default="+")
    m.add_argument("--group", action="store_true")
    m.set_defaults(fn=cmd_term)

    c = sub.add_parser("chain", parents=[common], help="transform chains so every constant lies in R")
    c.add_argument("--input", help="chain JSON file; random chains if omitted")
    c.add_argument("--count", type=int, default=1)
    c.set_defaults(fn=cmd_chain)

    v = sub.add_parser("cover", parents=[common], help="proper cover of a finite algebra")
    v.add_argument("op", choices=["build"])
    v.add_argument("--input", required=True)
    v.set_defaults(fn=cmd_cover)

    q = sub.add_parser("pact", parents=[common], help="partial actions on finite semilattices")
    q.add_argument("op", choices=["check", "meet", "nice"])
    q.add_argument("input", help="partial action JSON file")
    q.add_argument("--x", help="class as Y-name,word")
    q.add_argument("--y", help="class as Y-name,word")
    q.add_argument("--max-len", type=int, default=4)
    q.set_defaults(fn=cmd_pact)

    r = sub.add_parser("verify", parents=[common], help="run a property suite")
    r.add_argument("suite", choices=[*SUITES, "all"])
    r.add_argument("--instances", type=int, default=100, help="random instances per term shape")
    r.add_argument("--chains", type=int, default=1000)
    r.set_defaults(fn=cmd_verify)
    return p


def run_command(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        alphabet = W.Alphabet.first(args.omega)
        cfg = Config(seed=args.seed, samples=args.samples, omega=args.omega, bound=args.bound)
        if args.cmd == "verify":
            cfg.instances, cfg.chains = args.instances, args.chains
        out = Out(args.json)
        code = args.fn(args, Session(alphabet, cfg), out)
    except (InputError, RsgError) as exc:
        print(f"rsg: error: {exc}", file=sys.stderr)
        return 2
    out.flush()
    return code


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
