"""``pfadecide`` command line.

Exit codes: 0 answered (witness found / check true), 1 empty or false,
2 usage or input error, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .ambiguity import classify
from .decider import BudgetExceeded, NotPolynomialError, decide, verify_witness
from .fileformat import read_pfa, write_pfa
from .gadgets import QuadInstance, RegexUnionSpec, Variant, quad_gadget, regex_union_gadget, verify_bundle
from .linalg import format_rational, parse_rational
from .oracle import oracle_decide, sweep_unary
from .pfa import Mode, PfaError, Query, accept_prob, format_runs

EXIT_OK, EXIT_NO, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


def _rational(text: str):
    try:
        return parse_rational(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _nonneg(text: str) -> int:
    val = int(text)
    if val < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return val


def _emit(args, human: list[str], machine: dict) -> None:
    if args.json:
        print(json.dumps(machine, indent=2))
    else:
        for line in human:
            print(line)


def _word(alphabet, word) -> str:
    return format_runs(alphabet, [(a, 1) for a in word]) if word else "ε"


# ---------------------------------------------------------------------------
# subcommands


def cmd_classify(args) -> int:
    pfa = read_pfa(args.file)
    rep = classify(pfa)
    human = [rep.summary()]
    machine = {"class": rep.kind.value, "degree": rep.degree}
    if rep.eda_witness:
        w = rep.eda_witness
        human.append(f"eda state={w.state + 1} word={_word(pfa.alphabet, w.word)}")
        machine["eda_witness"] = {"state": w.state + 1, "word": [pfa.alphabet[a] for a in w.word]}
    links = []
    for link in rep.degree_witness:
        human.append(
            f"ida r={link.r + 1} s={link.s + 1} loop={_word(pfa.alphabet, link.loop_word)}"
            f" bridge={_word(pfa.alphabet, link.bridge)}"
        )
        links.append(
            {
                "r": link.r + 1,
                "s": link.s + 1,
                "loop": [pfa.alphabet[a] for a in link.loop_word],
                "bridge": [pfa.alphabet[a] for a in link.bridge],
            }
        )
    if links:
        machine["degree_witness"] = links
    _emit(args, human, machine)
    return EXIT_OK


def cmd_decide(args) -> int:
    pfa = read_pfa(args.file)
    q = Query(args.lam, Mode(args.mode))
    dec = decide(pfa, q, budget=args.budget, residue=args.residue)
    machine = {"outcome": dec.outcome.value, "query": str(q), "d": dec.d}
    if dec.is_witness:
        machine.update(
            {"k": str(dec.length), "s": str(dec.s), "r": str(dec.r), "probability": format_rational(dec.probability)}
        )
    machine["residues"] = [
        {"s": a.s, "k_star": str(a.bound.k_star), "regime": a.bound.regime.value, "scanned": a.scanned}
        for a in dec.audits
    ]
    human = [dec.summary()]
    if not args.quiet:
        human.append(dec.certificate())
    _emit(args, human, machine)
    return EXIT_OK if dec.is_witness else EXIT_NO


def cmd_verify(args) -> int:
    pfa = read_pfa(args.file)
    q = Query(args.lam, Mode(args.mode))
    chk = verify_witness(pfa, q, args.s, args.r, d=args.d)
    if not chk.fast_path:
        print("warning: matrix is not {0,1}; exact squaring used without the size guarantee", file=sys.stderr)
    _emit(
        args,
        [f"{'TRUE' if chk.holds else 'FALSE'} k={chk.length} p={format_rational(chk.probability)}"],
        {"holds": chk.holds, "k": str(chk.length), "probability": format_rational(chk.probability),
         "fast_path": chk.fast_path},
    )
    return EXIT_OK if chk.holds else EXIT_NO


def cmd_eval(args) -> int:
    pfa = read_pfa(args.file)
    p = accept_prob(pfa, args.word)
    _emit(args, [format_rational(p)], {"word": args.word, "probability": format_rational(p)})
    return EXIT_OK


def cmd_gadget(args) -> int:
    if args.kind == "quad":
        if None in (args.a, args.b, args.c):
            raise PfaError("gadget quad needs --a, --b and --c")
        bundle = quad_gadget(QuadInstance(args.a, args.b, args.c), args.variant)
        write_pfa(bundle.pfa, args.output)
        _emit(
            args,
            [f"lambda={format_rational(bundle.lam)}", f"wrote {bundle.pfa.n} states to {args.output}"],
            {"lambda": format_rational(bundle.lam), "states": bundle.pfa.n, "output": str(args.output)},
        )
    else:
        if not args.pairs:
            raise PfaError("gadget regex-union needs --pairs")
        spec = RegexUnionSpec.parse(args.pairs)
        pfa = regex_union_gadget(spec)
        write_pfa(pfa, args.output)
        _emit(args, [f"wrote {pfa.n} states to {args.output}"], {"states": pfa.n, "output": str(args.output)})
    return EXIT_OK


def cmd_oracle(args) -> int:
    pfa = read_pfa(args.file)
    q = Query(args.lam, Mode(args.mode))
    if args.csv:
        if not pfa.is_unary:
            raise PfaError("--csv sweeps are for unary automata")
        Path(args.csv).write_text(sweep_unary(pfa, args.max_len).to_csv(), encoding="utf-8")
    res = oracle_decide(pfa, q, args.max_len)
    if res.found:
        word = f"k={res.length}" if pfa.is_unary else f"w={_word(pfa.alphabet, res.word)}"
        human = [f"WITNESS {word} p={format_rational(res.probability)}"]
        machine = {"outcome": "witness", "length": res.length, "probability": format_rational(res.probability),
                   "word": [pfa.alphabet[a] for a in res.word]}
    else:
        human = [f"UNKNOWN (no witness up to length {args.max_len})"]
        machine = {"outcome": "unknown", "max_len": args.max_len}
    _emit(args, human, machine)
    return EXIT_OK if res.found else EXIT_NO


def cmd_selfcheck(args) -> int:
    bundle = quad_gadget(QuadInstance(args.a, args.b, args.c), args.variant)
    rep = verify_bundle(bundle, args.grid)
    _emit(
        args,
        rep.lines() + [f"{'OK' if rep.passed else 'FAILED'} {bundle.variant.value} {args.a},{args.b},{args.c}"],
        {"passed": rep.passed, "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in rep.checks]},
    )
    return EXIT_OK if rep.passed else EXIT_NO


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")

    query = argparse.ArgumentParser(add_help=False)
    query.add_argument("--mode", choices=[m.value for m in Mode], default="reach")
    query.add_argument("--lambda", dest="lam", type=_rational, required=True, help="cutpoint p/q")

    parser = argparse.ArgumentParser(prog="pfadecide", description="Exact cutpoint questions for PFAs.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common], help="ambiguity class with witnesses")
    p.add_argument("file")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("decide", parents=[common, query], help="decide a unary cutpoint question")
    p.add_argument("file")
    p.add_argument("--budget", type=_nonneg, default=10**6, help="max number of scanned values")
    p.add_argument("--residue", type=_nonneg, default=None, help="only consider lengths k = s mod d")
    p.add_argument("--quiet", action="store_true", help="omit the certificate")
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("verify", parents=[common, query], help="check a witness of length s + r*d")
    p.add_argument("file")
    p.add_argument("--s", type=_nonneg, required=True)
    p.add_argument("--r", type=_nonneg, required=True)
    p.add_argument("--d", type=_nonneg, default=None, help="period (default: computed)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("eval", parents=[common], help="exact acceptance probability of a word")
    p.add_argument("file")
    p.add_argument("--word", required=True, help='e.g. "h^3 g^2", "abba", "a^1000" or ""')
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("gadget", parents=[common], help="write a hardness gadget")
    p.add_argument("kind", choices=["quad", "regex-union"])
    p.add_argument("--a", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--c", type=int)
    p.add_argument("--variant", choices=[v.value for v in Variant], default="reach")
    p.add_argument("--pairs", help='"z1,r1;z2,r2;..."')
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_gadget)

    p = sub.add_parser("oracle", parents=[common, query], help="bounded brute-force search")
    p.add_argument("file")
    p.add_argument("--max-len", type=_nonneg, default=64)
    p.add_argument("--csv", help="also write k,p/q lines for k = 0..max-len (unary only)")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("selfcheck", parents=[common], help="verify a quadratic gadget on a grid")
    p.add_argument("--variant", choices=[v.value for v in Variant], default="reach")
    p.add_argument("--a", type=int, default=1)
    p.add_argument("--b", type=int, default=1)
    p.add_argument("--c", type=int, default=1)
    p.add_argument("--grid", type=_nonneg, default=8)
    p.set_defaults(func=cmd_selfcheck)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (PfaError, NotPolynomialError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
