"""Command-line front end: ``ggs {invariants,index,isomorphic,portrait,verify,sweep}``.

Exit status is 0 on success, 1 when a verification mismatches and 2 on any
usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Sequence

from ggs import __version__
from ggs.circulant import (
    circ_dim,
    commutator_vectors,
    stab_rank_t,
    theta_b,
    theta_c,
    w_codim,
)
from ggs.errors import UsageError
from ggs.formulas import derived_index_log, stabilizer_index_log
from ggs.treeauto import TreeWord, portrait, section
from ggs.tuples import (
    DefiningTuple,
    are_isomorphic,
    classify,
    first_difference,
    parse_entries,
    read_corpus,
    second_difference,
)
from ggs.verify import CHECKS, VerificationPlan, run_plan, sweep

INT64_MAX = 2**63 - 1
MAX_DECIMAL_DIGITS = 4096
MAX_DEPTH = 6


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(2)


def _power(p: int, k: int) -> str:
    if k * math.log2(p) < 64 and p**k <= INT64_MAX:
        return f"{p}^{k} (={p**k})"
    return f"{p}^{k}"


def _decimal(p: int, k: int) -> str | None:
    """``p^k`` as a decimal string, or None when it would exceed the digit cap."""
    if k * math.log10(p) > MAX_DECIMAL_DIGITS:
        return None
    return str(p**k)


def _tuple(p: int, text: str) -> DefiningTuple:
    return DefiningTuple(p, parse_entries(text))


def _envelope(command: str, e: DefiningTuple | None, results: list, verdict: str = "pass") -> dict:
    return {
        "version": __version__,
        "command": command,
        "input": {"p": e.p, "e": list(e.e)} if e is not None else {},
        "results": results,
        "verdict": verdict,
    }


def _emit(args, payload: dict, lines: Sequence[str]) -> None:
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print("\n".join(lines))


def _fmt(v) -> str:
    return "(" + ",".join(map(str, v)) + ")"


def cmd_invariants(args) -> int:
    e = _tuple(args.p, args.e)
    c = classify(e)
    ep, epp = first_difference(e), second_difference(e)
    ds = commutator_vectors(e)
    res = {
        "e_prime": list(ep.entries),
        "e_second": list(epp.entries),
        "sym_e": c.sym_e,
        "con_eprime": c.con_eprime,
        "sym_esecond": c.sym_esecond,
        "class_value": c.class_value,
        "t": stab_rank_t(e),
        "w_codim": w_codim(e),
        "theta_b": list(theta_b(e).coords),
        "theta_c": list(theta_c(e).coords),
        "commutator_vectors": [{"i": i, "d": list(d.coords), "circ_dim": circ_dim(d)} for i, d in enumerate(ds, 1)],
    }
    lines = [
        str(e),
        f"e'  = {_fmt(ep.entries)}",
        f"e'' = {_fmt(epp.entries)}",
        f"class (sym e, con e', sym e'') = ({c.sym_e},{c.con_eprime},{c.sym_esecond}), value {c.class_value}",
        f"t = {res['t']}",
        f"w_codim = {res['w_codim']}",
        f"theta(b) = {_fmt(res['theta_b'])}",
        f"theta(c) = {_fmt(res['theta_c'])}",
    ]
    lines += [f"d_{r['i']} = {_fmt(r['d'])}  circ dim {r['circ_dim']}" for r in res["commutator_vectors"]]
    _emit(args, _envelope("invariants", e, [res]), lines)
    return 0


def cmd_index(args) -> int:
    e = _tuple(args.p, args.e)
    if args.n < 1:
        raise UsageError(f"--n must be >= 1, got {args.n}")
    fn = derived_index_log if args.series == "derived" else stabilizer_index_log
    k = fn(e, args.n)
    res = {"series": args.series, "n": args.n, "log": k, "index": _decimal(e.p, k)}
    _emit(args, _envelope("index", e, [res]), [str(k), _power(e.p, k)])
    return 0


def cmd_isomorphic(args) -> int:
    e = _tuple(args.p, args.e)
    d = _tuple(args.p, args.d)
    w = are_isomorphic(e, d)
    res = {"d": list(d.e), "isomorphic": w is not None}
    if w is not None:
        res.update(lam=w.lam, mu=w.mu)
    line = f"λ={w.lam} μ={w.mu}" if w else "not isomorphic"
    _emit(args, _envelope("isomorphic", e, [res]), [line])
    return 0


def _portrait_lines(node: dict, indent: str = "", label: str = "") -> list[str]:
    tag = f" [{node['nucleus']}]" if "nucleus" in node else ""
    out = [f"{indent}{label}{node['word']}  (root action {node['root_action']}){tag}"]
    for x, child in enumerate(node.get("sections", [])):
        out += _portrait_lines(child, indent + "  ", f"{x}: ")
    return out


def cmd_portrait(args) -> int:
    e = _tuple(args.p, args.e)
    if not 0 <= args.depth <= MAX_DEPTH:
        raise UsageError(f"--depth must be in 0..{MAX_DEPTH}, got {args.depth}")
    w = TreeWord.parse(e, args.word)
    if args.vertex:
        w = section(w, args.vertex)
    tree = portrait(w, args.depth)
    _emit(args, _envelope("portrait", e, [{"vertex": args.vertex or "", "portrait": tree}]), _portrait_lines(tree))
    return 0


def _checks(text: str | None) -> tuple[str, ...]:
    if not text:
        return CHECKS
    out = tuple(c.strip() for c in text.split(",") if c.strip())
    bad = [c for c in out if c not in CHECKS]
    if bad:
        raise UsageError(f"unknown check {bad[0]!r}; choose from {', '.join(CHECKS)}")
    return out


def _record_line(r: dict) -> str:
    line = f"  {r['verdict']:<5} {r['name']}: predicted {r['predicted']} computed {r['computed']}"
    return line


def cmd_verify(args) -> int:
    e = _tuple(args.p, args.e)
    plan = VerificationPlan(e, args.level, _checks(args.checks), args.n)
    report = run_plan(plan)
    d = report.as_dict()
    lines = [f"{e} level {args.level}: {report.verdict}"] + [_record_line(r) for r in d["records"]]
    _emit(args, _envelope("verify", e, d["records"], report.verdict), lines)
    return 0 if report.verdict == "pass" else 1


def cmd_sweep(args) -> int:
    tuples = None
    if args.corpus:
        with open(args.corpus, encoding="utf-8") as fh:
            tuples = read_corpus(fh)
    result = sweep(args.p, args.level, _checks(args.checks), args.sample, args.seed, tuples, args.workers)
    d = result.as_dict()
    lines = [f"p={args.p} level {args.level}: {result.passed}/{len(result.reports)} pass"]
    for r in d["reports"]:
        if r["verdict"] != "pass":
            failed = [x["name"] for x in r["records"] if x["verdict"] == "fail"]
            lines.append(f"  fail p={r['p']} e={','.join(map(str, r['e']))}: {', '.join(failed)}")
    payload = _envelope("sweep", None, d["reports"], result.verdict)
    payload["input"] = {"p": args.p, "level": args.level, "seed": d["seed"], "tuples": d["tuples"]}
    payload["passed"] = result.passed
    _emit(args, payload, lines)
    return 0 if result.verdict == "pass" else 1


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ggs", description="Derived series and congruence quotients of GGS-groups.")
    parser.add_argument("--version", action="version", version=f"ggs {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def command(name, fn, help, tuple_args=True):
        sp = sub.add_parser(name, help=help)
        sp.add_argument("--p", type=int, required=True, help="odd prime")
        if tuple_args:
            sp.add_argument("--e", required=True, help="defining tuple, e.g. 1,0,0,1")
        sp.add_argument("--json", action="store_true", help="emit JSON")
        sp.set_defaults(func=fn)
        return sp

    command("invariants", cmd_invariants, "difference tuples, class bits, circulant data")

    sp = command("index", cmd_index, "closed-form log index")
    sp.add_argument("--series", choices=("derived", "stabilizer"), default="derived")
    sp.add_argument("--n", type=int, required=True)

    sp = command("isomorphic", cmd_isomorphic, "isomorphism witness between two tuples")
    sp.add_argument("--d", required=True, help="second defining tuple")

    sp = command("portrait", cmd_portrait, "section tree of a word")
    sp.add_argument("--word", required=True, help='e.g. "b a^2 b^-1"')
    sp.add_argument("--vertex", default="", help="start from the section at this vertex, e.g. 01")
    sp.add_argument("--depth", type=int, default=1)

    sp = command("verify", cmd_verify, "brute-force checks in congruence quotients")
    sp.add_argument("--level", type=int, default=3)
    sp.add_argument("--checks", help=f"comma list from {','.join(CHECKS)}")
    sp.add_argument("--n", type=int, help="single derived depth (default 1..level-1)")

    sp = command("sweep", cmd_sweep, "run checks over all (or sampled) tuples", tuple_args=False)
    sp.add_argument("--level", type=int, default=3)
    sp.add_argument("--checks", help=f"comma list from {','.join(CHECKS)}")
    sp.add_argument("--sample", type=int, help="number of tuples to sample")
    sp.add_argument("--seed", type=int, default=1)
    sp.add_argument("--corpus", help="file with one 'p=..., e=...' per line")
    sp.add_argument("--workers", type=int, help="worker processes (default: CPU count)")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"ggs {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"ggs {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
