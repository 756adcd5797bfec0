"""Command-line front end.

Exit codes: 0 on success, 1 when a replay or certification reports a failed
verdict, 2 on malformed input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from . import characters as ch
from . import replay as rp
from . import sn_repr as sn
from .group_ring import (
    GroupRingElement,
    Scalar,
    fraction_str,
    inner_product,
    multiply,
    parse_element,
    star,
    trace,
)
from .perm import IDENTITY, cycle_decomposition, cycle_type, inverse, parity, parse_cycles, support
from .subalgebra import NormalSubgroup, expectation, expectation_trace, support_control_check

SEED_ENV = "THOMA_LAB_SEED"


class UsageError(ValueError):
    pass


def _elem(text: str) -> GroupRingElement:
    text = text.strip()
    if text.startswith("["):
        return GroupRingElement.from_json(json.loads(text))
    return parse_element(text)


def _params(args) -> ch.ThomaParameters:
    if getattr(args, "params", None):
        return ch.ThomaParameters.from_json(json.loads(args.params))
    return ch.ThomaParameters.parse(args.alpha or "", args.beta or "")


def _ints(text: str) -> list[int]:
    return [int(t) for t in text.replace(" ", ",").split(",") if t]


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False)


def _emit(args, text: str, payload) -> None:
    if args.format == "json":
        print(_dump(payload))
    else:
        print(text)


def _scalar_out(args, value) -> None:
    if isinstance(value, Scalar):
        _emit(args, str(value), {"value": value.to_json()})
    else:
        _emit(args, str(value), {"value": fraction_str(value)})


# --- perm -------------------------------------------------------------------


def cmd_perm(args) -> int:
    perms = [parse_cycles(p) for p in args.perms]
    op = args.op
    if op == "compose":
        out = IDENTITY
        for p in perms:
            out = out * p
        _emit(args, str(out), {"perm": str(out)})
    elif op == "inverse":
        (p,) = _exactly(perms, 1)
        _emit(args, str(inverse(p)), {"perm": str(inverse(p))})
    elif op == "cycles":
        (p,) = _exactly(perms, 1)
        cyc = cycle_decomposition(p)
        _emit(args, " ".join("(" + " ".join(map(str, c)) + ")" for c in cyc) or "e", {"cycles": cyc})
    elif op == "type":
        (p,) = _exactly(perms, 1)
        ct = cycle_type(p).as_dict()
        _emit(args, " ".join(f"{k}:{m}" for k, m in ct.items()) or "{}", {"cycle_type": ct})
    elif op == "parity":
        (p,) = _exactly(perms, 1)
        _emit(args, f"{parity(p):+d}", {"parity": parity(p)})
    elif op == "support":
        (p,) = _exactly(perms, 1)
        s = sorted(support(p))
        _emit(args, " ".join(map(str, s)), {"support": s})
    return 0


def _exactly(items: list, n: int) -> list:
    if len(items) != n:
        raise UsageError(f"expected {n} argument(s), got {len(items)}")
    return items


# --- ring -------------------------------------------------------------------


def cmd_ring(args) -> int:
    xs = [_elem(x) for x in args.elems]
    if args.op == "mul":
        if not xs:
            raise UsageError("mul needs at least one element")
        out = xs[0]
        for x in xs[1:]:
            out = multiply(out, x)
        _emit(args, str(out), out.to_json())
    elif args.op == "star":
        (x,) = _exactly(xs, 1)
        out = star(x)
        _emit(args, str(out), out.to_json())
    elif args.op == "trace":
        (x,) = _exactly(xs, 1)
        _scalar_out(args, trace(x))
    elif args.op == "inner":
        a, b = _exactly(xs, 2)
        _scalar_out(args, inner_product(a, b))
    return 0


# --- char -------------------------------------------------------------------


def _perm_list(args) -> list:
    if args.perms:
        return [parse_cycles(p) for p in args.perms]
    return ch.all_permutations(args.n)


def cmd_char(args) -> int:
    if args.op == "eval":
        if not args.perm:
            raise UsageError("char eval needs --perm")
        value = ch.thoma_eval(_params(args), parse_cycles(args.perm))
        _scalar_out(args, value)
        return 0
    if args.op == "gram":
        elems = _perm_list(args)
        M = ch.gram_matrix(ch.thoma_character(_params(args)), elems)
        rows = [[str(x) for x in row] for row in M]
        if args.format == "csv":
            print("\n".join(",".join(r) for r in rows))
        else:
            _emit(args, "\n".join(" ".join(r) for r in rows),
                  {"elements": [str(p) for p in elems], "matrix": [[x.to_json() for x in row] for row in M]})
        return 0
    if args.op == "psd":
        if args.matrix:
            raw = json.loads(open(args.matrix).read() if os.path.exists(args.matrix) else args.matrix)
            M = [[Scalar.from_json(x) for x in row] for row in raw]
        else:
            M = ch.gram_matrix(ch.thoma_character(_params(args)), _perm_list(args))
        cert = ch.certify_psd(M)
        ok = cert.verify(M)
        body = cert.to_json() | {"recomputed": ok}
        _emit(args, f"{cert.verdict} (pivots: {' '.join(map(str, cert.pivots))})", body)
        return 0 if cert.is_psd and ok else 1
    if args.op == "regular-check":
        comps = [ch.ThomaParameters.from_json(c) for c in json.loads(args.components)]
        weights = [w for w in args.weights.split(",") if w.strip()] if args.weights else [1] * len(comps)
        res = ch.check_regular_from_3cycle(weights, comps, seed=args.seed)
        _emit(args, res.status, res.to_json())
        return 1 if res.status == "fail" else 0
    raise UsageError(f"unknown char operation {args.op}")


# --- expect -----------------------------------------------------------------


def cmd_expect(args) -> int:
    H = NormalSubgroup.parse(args.subgroup)
    if args.op == "apply":
        if not args.elem:
            raise UsageError("expect apply needs --elem")
        out = expectation(H, _elem(args.elem))
        _emit(args, str(out), out.to_json())
        return 0
    if not args.perm:
        raise UsageError(f"expect {args.op} needs --perm")
    s = parse_cycles(args.perm)
    if args.op == "trace":
        _scalar_out(args, expectation_trace(H)(s))
        return 0
    ok = support_control_check(H, s)
    _emit(args, "true" if ok else "false", {"verified": ok})
    return 0 if ok else 1


# --- sn ---------------------------------------------------------------------


def cmd_sn(args) -> int:
    if args.op == "table":
        parts = sn.partitions(args.n)
        table = [[sn.mn_character(lam, rho) for rho in parts] for lam in parts]
        labels = [",".join(map(str, p)) for p in parts]
        if args.format == "json":
            print(_dump({"partitions": labels, "table": table}))
        elif args.format == "csv":
            print("lambda," + ",".join(f'"{l}"' for l in labels))
            for lab, row in zip(labels, table):
                print(f'"{lab}",' + ",".join(map(str, row)))
        else:
            width = max(len(l) for l in labels) + 2
            print(" " * width + " ".join(f"{l:>{width}}" for l in labels))
            for lab, row in zip(labels, table):
                print(f"{lab:<{width}}" + " ".join(f"{v:>{width}}" for v in row))
        return 0
    if args.op == "dim":
        lam = sn.Partition(_ints(args.partition))
        d = sn.hook_dimension(lam)
        _emit(args, str(d), {"partition": list(lam), "dimension": d})
        return 0
    if args.op == "limit":
        rows = sn.thoma_limit_experiment(_params(args), args.k, _ints(args.n_values))
        if args.format == "json":
            print(_dump([
                {"n": r.n, "diagram": list(r.diagram), "exact_value": fraction_str(r.value),
                 "decimal_value": r.decimal(), "abs_error": fraction_str(r.error)}
                for r in rows
            ]))
        else:
            sys.stdout.write(sn.limit_csv(rows))
        return 0
    raise UsageError(f"unknown sn operation {args.op}")


# --- replay -----------------------------------------------------------------


def _print_report(args, report: rp.ReplayReport) -> int:
    if args.format == "json":
        print(_dump(report.to_json()))
    else:
        print(report.to_text())
    return 0 if report.passed else 1


def cmd_replay(args) -> int:
    op = args.op
    if op == "branch":
        return _print_report(args, rp.replay_transposition_branch())
    if op == "step1":
        return _print_report(args, rp.replay_step1())
    if op == "step2":
        return _print_report(args, rp.replay_step2_solutions())
    if op == "symmetry":
        return _print_report(args, rp.replay_rule_out_symmetry(args.case))
    if op == "conclusion":
        return _print_report(args, rp.replay_conclusion(args.branch, seed=args.seed))
    if op == "finite-isr":
        return _print_report(args, rp.finite_isr_counting(args.n if args.n is not None else 2))
    if op == "normal-subgroups":
        n = args.n if args.n is not None else 5
        subs = rp.enumerate_normal_subgroups(n)
        if args.format == "json":
            print(_dump({"n": n, "count": len(subs), "subgroups": [h.to_json() for h in subs]}))
        else:
            print(f"S_{n}: {len(subs)} normal subgroups")
            for h in subs:
                print(f"  order {h.order}: <{', '.join(map(str, h.generators)) or 'e'}>")
        return 0
    if op == "all":
        out = rp.replay_all(seed=args.seed)
        if args.format == "json":
            print(_dump(out))
        else:
            for sec in out["sections"]:
                print(f"{sec['overall']:>4}  {sec['case']}")
            print(f"overall: {out['overall']}")
        return 0 if out["overall"] == "pass" else 1
    raise UsageError(f"unknown replay operation {op}")


# --- parser -----------------------------------------------------------------


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def build_parser(seed: int = 0) -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default="text")
    common.add_argument("--seed", type=int, default=seed, help=f"sampling seed (env {SEED_ENV})")

    params = argparse.ArgumentParser(add_help=False)
    params.add_argument("--alpha", default="", help='comma separated fractions, e.g. "1/2,1/2"')
    params.add_argument("--beta", default="")
    params.add_argument("--params", help='JSON such as {"alpha": ["1/2"], "beta": []}')

    parser = argparse.ArgumentParser(
        prog="thoma-lab",
        description="Exact computations in the finitary symmetric group and its characters.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("perm", parents=[common], help="permutation arithmetic")
    p.add_argument("op", choices=("compose", "inverse", "cycles", "type", "parity", "support"))
    p.add_argument("perms", nargs="+", metavar="PERM")
    p.set_defaults(func=cmd_perm)

    p = sub.add_parser("ring", parents=[common], help="group ring arithmetic")
    p.add_argument("op", choices=("mul", "star", "trace", "inner"))
    p.add_argument("elems", nargs="+", metavar="ELEM")
    p.set_defaults(func=cmd_ring)

    p = sub.add_parser("char", parents=[common, params], help="Thoma characters and positivity")
    p.add_argument("op", choices=("eval", "gram", "psd", "regular-check"))
    p.add_argument("--perm")
    p.add_argument("--perms", nargs="*")
    p.add_argument("--n", type=int, default=3, help="use all of S_n when --perms is absent")
    p.add_argument("--matrix", help="JSON matrix (inline or file) for psd")
    p.add_argument("--weights", help="comma separated mixture weights")
    p.add_argument("--components", default='[{"alpha": [], "beta": []}]', help="JSON list of parameters")
    p.set_defaults(func=cmd_char)

    p = sub.add_parser("expect", parents=[common], help="conditional expectations")
    p.add_argument("op", choices=("apply", "trace", "support-check"))
    p.add_argument("--subgroup", required=True, choices=[h.value for h in NormalSubgroup])
    p.add_argument("--elem")
    p.add_argument("--perm")
    p.set_defaults(func=cmd_expect)

    p = sub.add_parser("sn", parents=[common, params], help="finite symmetric group characters")
    p.add_argument("op", choices=("table", "dim", "limit"))
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--partition", default="")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--n-values", default="8,12,16,20")
    p.set_defaults(func=cmd_sn)

    p = sub.add_parser("replay", parents=[common], help="replay the proof steps")
    p.add_argument(
        "op",
        choices=("branch", "step1", "step2", "symmetry", "conclusion", "normal-subgroups", "finite-isr", "all"),
    )
    p.add_argument("--case", choices=("plus", "minus"), default="plus")
    p.add_argument("--branch", choices=("full", "alternating", "trivial"), default="full")
    p.add_argument("--n", type=int)
    p.set_defaults(func=cmd_replay)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    try:
        parser = build_parser(_default_seed())
    except UsageError as exc:
        print(f"thoma-lab: error: {exc}", file=sys.stderr)
        return 2
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, ValueError, KeyError, json.JSONDecodeError) as exc:
        parser.print_usage(sys.stderr)
        print(f"thoma-lab: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"thoma-lab: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
