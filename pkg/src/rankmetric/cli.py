"""The `rankcode` command line tool."""

from __future__ import annotations

import argparse
import csv
import io
import logging
import sys

import numpy as np

from . import counting, delsarte, gabidulin, qcalc, verify
from .codefile import CodeFileError, format_code, parse_code
from .delsarte import BudgetExceeded, DelsarteCode
from .finite_field import ExtensionSpec, FieldBasis, FieldError, field_for_order
from .gabidulin import GabidulinCode

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_BUDGET, EXIT_VERIFY = 0, 1, 2, 3, 4

log = logging.getLogger("rankmetric")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _table(headers, rows) -> str:
    cells = [[str(h) for h in headers]] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(headers))]
    # numbers right-aligned, text left-aligned
    numeric = [all(r[i].lstrip("-").isdigit() for r in cells[1:]) for i in range(len(headers))]
    lines = []
    for r in cells:
        lines.append("  ".join(c.rjust(w) if num else c.ljust(w) for c, w, num in zip(r, widths, numeric)).rstrip())
    return "\n".join(lines) + "\n"


def _csv(headers, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(headers)
    w.writerows(rows)
    return buf.getvalue()


def _emit(args, headers, rows, preamble: list[str] = ()) -> None:
    if args.csv:
        sys.stdout.write(_csv(headers, rows))
    else:
        for line in preamble:
            print(line)
        sys.stdout.write(_table(headers, rows))


def _write_or_print(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load(path: str):
    try:
        if path == "-":
            return parse_code(sys.stdin.read())
        with open(path, encoding="utf-8") as fh:
            return parse_code(fh.read())
    except OSError as exc:
        raise UsageError(str(exc)) from exc


def _parse_basis(ext: ExtensionSpec, text: str | None, fallback: FieldBasis | None) -> FieldBasis:
    if text is None:
        return fallback if fallback is not None else FieldBasis.power(ext)
    return FieldBasis(ext, [ext.parse(x) for x in text.split(",")])


def _as_delsarte(cf, basis_text: str | None = None) -> DelsarteCode:
    if isinstance(cf.code, GabidulinCode):
        return gabidulin.expand_code(cf.code, _parse_basis(cf.code.ext, basis_text, cf.basis))
    return cf.code


def _distribution_rows(A) -> list[tuple[int, int]]:
    return [(r, c) for r, c in enumerate(A.counts)]


# -- code ---------------------------------------------------------------------------------------


def cmd_code(args) -> int:
    cf = _load(args.file)
    C = _as_delsarte(cf, args.basis)
    budget = args.enum_budget
    header = f"# code {C.field} {C.k}x{C.m} dim={C.dim}"
    if args.action == "dual":
        _write_or_print(format_code(delsarte.dual(C)), args.output)
        return EXIT_OK
    if args.action == "rankdist":
        if not args.of_dual:
            A, route = delsarte.rank_distribution_route(C, budget)
            _emit(args, ["rank", "count"], _distribution_rows(A), [header, f"# route: {route}"])
            return EXIT_OK
        D = delsarte.dual(C)
        q, kk, mm = C.field.order, min(C.shape), max(C.shape)
        results = {}
        if args.via in ("enumerate", "all"):
            results["enumerate"] = delsarte.rank_distribution_route(D, budget)[0].counts
        if args.via in ("recursive", "explicit", "all"):
            A = delsarte.rank_distribution(C, budget)
            if args.via in ("recursive", "all"):
                results["recursive"] = qcalc.dual_distribution_recursive(A.counts, C.dim, q, kk, mm).counts
            if args.via in ("explicit", "all"):
                results["explicit"] = qcalc.dual_distribution_explicit(A.counts, C.dim, q, kk, mm).counts
        routes = list(results)
        rows = [(r, *(results[v][r] for v in routes)) for r in range(kk + 1)]
        pre = [header, f"# dual distribution dim={D.dim} routes: {', '.join(routes)}"]
        agree = len({results[v] for v in routes}) == 1
        if len(routes) > 1:
            pre.append(f"# routes agree: {'PASS' if agree else 'FAIL'}")
        _emit(args, ["rank", *routes], rows, pre)
        return EXIT_OK if agree else EXIT_VERIFY
    if args.action == "minrk":
        if C.dim == 0:
            raise UsageError("the zero code has no minimum rank")
        A, route = delsarte.rank_distribution_route(C, budget)
        value = next(i for i in range(1, len(A)) if A[i])
        _emit(args, ["property", "value"], [("minrk", value)], [header, f"# route: {route}"])
        return EXIT_OK
    if args.action == "maxrk":
        A, route = delsarte.rank_distribution_route(C, budget)
        value = max(i for i in range(len(A)) if A[i])
        _emit(args, ["property", "value"], [("maxrk", value)], [header, f"# route: {route}"])
        return EXIT_OK
    if args.action == "check-mrd":
        rows = [("dim", C.dim)]
        if C.dim:
            d = delsarte.min_rank(C, budget)
            rows += [("minrk", d), ("singleton_bound", delsarte.singleton_bound(C.k, C.m, d))]
        rows.append(("mrd", "yes" if delsarte.is_mrd(C, budget) else "no"))
        _emit(args, ["property", "value"], rows, [header])
        return EXIT_OK
    if args.action == "check-anticode":
        M = delsarte.max_rank(C, budget)
        anti = delsarte.is_optimal_anticode(C, budget)
        rows = [("dim", C.dim), ("maxrk", M), ("max(k,m)*maxrk", max(C.shape) * M), ("optimal_anticode", "yes" if anti else "no")]
        kk = min(C.shape)
        D, rem = divmod(C.dim, max(C.shape))
        if args.trials and not rem and D <= kk - 1:
            rng = np.random.default_rng(args.seed)
            ok = delsarte.mrd_intersection_test(C, args.trials, rng)
            rows.append((f"meets_mrd_trivially({args.trials} trials)", "yes" if ok else "no"))
        _emit(args, ["property", "value"], rows, [header, f"# seed: {args.seed}"])
        return EXIT_OK
    raise UsageError(f"unknown action {args.action}")  # pragma: no cover


# -- gabidulin ----------------------------------------------------------------------------------


def _require_gabidulin(cf) -> GabidulinCode:
    if not isinstance(cf.code, GabidulinCode):
        raise UsageError("this command needs a gabidulin code file")
    return cf.code


def cmd_gabidulin(args) -> int:
    if args.action == "mrd-construct":
        F = field_for_order(args.q)
        ext = ExtensionSpec(F, args.m)
        points = [ext.parse(x) for x in args.points.split(",")] if args.points else None
        C = gabidulin.evaluation_code(ext, args.d, points, args.k)
        _write_or_print(format_code(C), args.output)
        return EXIT_OK

    if args.action == "check-thm-2-7" and args.file is None:
        rng = np.random.default_rng(args.seed)
        rows, ok_all = [], True
        for t in range(args.trials):
            q = int(rng.choice([2, 3, 4]))
            m = int(rng.integers(1, 4))
            k = int(rng.integers(1, 5))
            ext = ExtensionSpec(field_for_order(q), m)
            C = gabidulin.random_gabidulin_code(ext, k, int(rng.integers(0, k + 1)), rng)
            ok = gabidulin.check_orthobasis_duality(C, gabidulin.random_basis(ext, rng))
            ok_all &= ok
            rows.append((t, q, m, k, C.dim, "PASS" if ok else "FAIL"))
        _emit(args, ["trial", "q", "m", "k", "dim", "result"], rows, [f"# seed: {args.seed} trials: {args.trials}"])
        print(f"# overall: {'PASS' if ok_all else 'FAIL'}", file=sys.stderr if args.csv else sys.stdout)
        return EXIT_OK if ok_all else EXIT_VERIFY

    cf = _load(args.file)
    C = _require_gabidulin(cf)
    ext = C.ext
    G = _parse_basis(ext, args.basis, cf.basis)
    if args.action == "expand":
        print(f"# basis: {', '.join(ext.format(v) for v in G.values)}")
        gens = cf.given if cf.given else [row.tolist() for row in C.basis]
        for g in gens:
            for gamma in G.values:
                vec = ext.mul(np.array(g, dtype=np.int64), gamma)
                M = gabidulin.expand_matrix(vec, G)
                label = ", ".join(ext.format(v) for v in vec)
                print(f"# M_G(({label})) = [{M.to_text()}]")
        _write_or_print(format_code(gabidulin.expand_code(C, G)), args.output)
        return EXIT_OK
    if args.action == "dual":
        _write_or_print(format_code(gabidulin.gabidulin_dual(C), cf.basis), args.output)
        return EXIT_OK
    if args.action == "check-thm-2-7":
        Gd = G.dual()
        Cd = gabidulin.gabidulin_dual(C)
        lhs = delsarte.dual(gabidulin.expand_code(C, G))
        same = gabidulin.expand_code(Cd, G) == lhs
        ok = gabidulin.check_orthobasis_duality(C, G)
        rows = [
            ("basis", ", ".join(ext.format(v) for v in G.values)),
            ("dual basis", ", ".join(ext.format(v) for v in Gd.values)),
            ("C_G(C)^perp == C_G(C^perp)", "equal" if same else "unequal"),
            ("C_G(C)^perp == C_G'(C^perp)", "equal" if ok else "unequal"),
            ("result", "PASS" if ok else "FAIL"),
        ]
        _emit(args, ["check", "value"], rows, [f"# code {C}"])
        return EXIT_OK if ok else EXIT_VERIFY
    raise UsageError(f"unknown action {args.action}")  # pragma: no cover


# -- count --------------------------------------------------------------------------------------


def cmd_count(args) -> int:
    q, k, m = args.q, args.k, args.m
    if k < 1 or m < 1:
        raise UsageError("k and m must be positive")
    try:
        field_for_order(q)
    except FieldError as exc:
        raise UsageError(str(exc)) from exc
    kk = min(k, m)
    ranks = range(kk + 1) if args.r is None else [args.r]
    depths = range(kk + 1) if args.trace_depth is None else [args.trace_depth]
    for r in ranks:
        if not 0 <= r <= kk:
            raise UsageError(f"rank must lie in [0, {kk}]")
    for h in depths:
        if not 0 <= h <= kk:
            raise UsageError(f"trace depth must lie in [0, {kk}]")

    methods = ["recursive", "explicit", "bruteforce"] if args.method == "all" else [args.method]
    census = counting.census_bruteforce(q, k, m, args.enum_budget) if "bruteforce" in methods else None

    def zero_count(method, r, h):
        if h == 0:
            return census.n(r, 0) if method == "bruteforce" else counting.count_rank(q, k, m, r)
        if method == "bruteforce":
            return census.n(r, h, 0)
        fn = counting.count_rank_htrace_recursive if method == "recursive" else counting.count_rank_htrace_explicit
        return fn(q, k, m, r, h)

    def value_count(method, r, h, t):
        if method == "bruteforce":
            return census.n(r, h, t)
        return counting.count_rank_trace_value(q, k, m, r, h, t, method=method)

    tables = {meth: {(r, h): zero_count(meth, r, h) for h in depths for r in ranks} for meth in methods}
    agree = all(tables[meth] == tables[methods[0]] for meth in methods)

    if args.csv:
        rows = []
        for h in depths:
            for r in ranks:
                for t in ([0] if h == 0 else range(q)):
                    vals = {meth: (zero_count(meth, r, h) if t == 0 else value_count(meth, r, h, t)) for meth in methods}
                    if len(set(vals.values())) != 1:
                        agree = False
                    rows.append((q, k, m, r, h, t, vals[methods[0]]))
        sys.stdout.write(_csv(["q", "k", "m", "r", "h", "trace_value", "count"], rows))
    else:
        print(f"# n_q(k x m, r, h): q={q} k={k} m={m}; h=0 counts all matrices of rank r, h>=1 those with zero h-trace")
        for meth in methods:
            print(f"# method: {meth}")
            rows = [(h, *(tables[meth][(r, h)] for r in ranks)) for h in depths]
            sys.stdout.write(_table(["h\\r", *ranks], rows))
    if len(methods) > 1:
        print(f"# three-route check: {'PASS' if agree else 'FAIL'}", file=sys.stderr if args.csv else sys.stdout)
    return EXIT_OK if agree else EXIT_VERIFY


# -- transform / mrd-dist -----------------------------------------------------------------------


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from exc


def cmd_transform(args) -> int:
    A = _int_list(args.distribution)
    k, m = min(args.k, args.m), max(args.k, args.m)
    methods = ["recursive", "explicit"] if args.method == "both" else [args.method]
    fns = {"recursive": qcalc.dual_distribution_recursive, "explicit": qcalc.dual_distribution_explicit}
    try:
        results = {meth: fns[meth](A, args.dim, args.q, k, m).counts for meth in methods}
    except qcalc.TransformError as exc:
        raise UsageError(str(exc)) from exc
    rows = [(r, *(results[meth][r] for meth in methods)) for r in range(k + 1)]
    agree = len(set(results.values())) == 1
    pre = [f"# dual distribution for q={args.q} {k}x{m} dim={args.dim}"]
    if len(methods) > 1:
        pre.append(f"# routes agree: {'PASS' if agree else 'FAIL'}")
    _emit(args, ["rank", *methods], rows, pre)
    return EXIT_OK if agree else EXIT_VERIFY


def cmd_mrd_dist(args) -> int:
    k, m = min(args.k, args.m), max(args.k, args.m)
    A = qcalc.mrd_distribution(args.q, k, m, args.d)
    _emit(args, ["rank", "count"], _distribution_rows(A), [f"# MRD distribution q={args.q} {k}x{m} minrk={args.d}"])
    return EXIT_OK


# -- verify -------------------------------------------------------------------------------------


def cmd_verify(args) -> int:
    cfg = verify.Config(seed=args.seed, trials=args.trials, max_q=args.max_q, max_dim=args.max_dim, budget=args.enum_budget)
    only = args.only.split(",") if args.only else None
    try:
        outcomes = verify.run_suite(cfg, only)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    rows = [(o.name, "PASS" if o.passed else "FAIL", o.cases, verify.reproduce_command(o.name, cfg)) for o in outcomes]
    pre = [f"# rankcode verify seed={cfg.seed} trials={cfg.trials} max_q={cfg.max_q} max_dim={cfg.max_dim} enum_budget={cfg.budget}"]
    _emit(args, ["property", "status", "cases", "reproduce"], rows, pre)
    failed = [o for o in outcomes if not o.passed]
    out = sys.stderr if args.csv else sys.stdout
    for o in failed:
        print(f"# {o.name}: {o.detail}", file=out)
    print(f"# summary: {len(outcomes) - len(failed)}/{len(outcomes)} PASS", file=out)
    return EXIT_VERIFY if failed else EXIT_OK


# -- parser -------------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="rankcode", description="Rank-metric code toolkit: duality, rank distributions, MRD codes and matrix counts.")
    p.add_argument("--enum-budget", type=int, default=delsarte.DEFAULT_ENUM_BUDGET, help="largest number of codewords or matrices to enumerate")
    p.add_argument("--csv", action="store_true", help="emit CSV instead of aligned tables")
    p.add_argument("-v", "--verbose", action="count", default=0, help="log canonicalization and routing decisions")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("code", help="operations on a code file")
    c.add_argument("action", choices=["dual", "rankdist", "minrk", "maxrk", "check-mrd", "check-anticode"])
    c.add_argument("file", help="code file ('-' for stdin)")
    c.add_argument("--basis", help="comma-separated basis used to expand a gabidulin file")
    c.add_argument("-o", "--output", help="write the resulting code file here")
    c.add_argument("--of-dual", action="store_true", help="rankdist: report the distribution of the dual code")
    c.add_argument("--via", choices=["enumerate", "recursive", "explicit", "all"], default="all",
                   help="rankdist --of-dual: how to obtain the dual distribution")
    c.add_argument("--trials", type=int, default=32, help="check-anticode: sampled MRD codes (0 to skip)")
    c.add_argument("--seed", type=int, default=0)
    c.set_defaults(func=cmd_code)

    g = sub.add_parser("gabidulin", help="gabidulin codes and their expansions")
    g.add_argument("action", choices=["expand", "dual", "mrd-construct", "check-thm-2-7"])
    g.add_argument("file", nargs="?", help="gabidulin code file")
    g.add_argument("--basis", help="comma-separated basis of the extension (default: file basis or power basis)")
    g.add_argument("-o", "--output")
    g.add_argument("-q", type=int, help="mrd-construct: base field order")
    g.add_argument("-m", type=int, help="mrd-construct: extension degree")
    g.add_argument("-k", type=int, help="mrd-construct: code length")
    g.add_argument("-d", type=int, help="mrd-construct: minimum rank")
    g.add_argument("--points", help="mrd-construct: comma-separated evaluation points")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--trials", type=int, default=20)
    g.set_defaults(func=cmd_gabidulin)

    n = sub.add_parser("count", help="count matrices by rank and h-trace")
    n.add_argument("-q", type=int, required=True)
    n.add_argument("-k", type=int, required=True)
    n.add_argument("-m", type=int, required=True)
    n.add_argument("-r", type=int, help="rank (default: all)")
    n.add_argument("-H", "--trace-depth", type=int, help="h (default: all, 0 = no trace condition)")
    n.add_argument("--method", choices=["recursive", "explicit", "bruteforce", "all"], default="recursive")
    n.set_defaults(func=cmd_count)

    t = sub.add_parser("transform", help="dual rank distribution from a rank distribution")
    t.add_argument("-q", type=int, required=True)
    t.add_argument("-k", type=int, required=True)
    t.add_argument("-m", type=int, required=True)
    t.add_argument("--dim", type=int, required=True, help="dimension of the code")
    t.add_argument("distribution", help="comma-separated A_0,...,A_min(k,m)")
    t.add_argument("--method", choices=["recursive", "explicit", "both"], default="both")
    t.set_defaults(func=cmd_transform)

    d = sub.add_parser("mrd-dist", help="rank distribution of an MRD code")
    d.add_argument("-q", type=int, required=True)
    d.add_argument("-k", type=int, required=True)
    d.add_argument("-m", type=int, required=True)
    d.add_argument("-d", type=int, required=True)
    d.set_defaults(func=cmd_mrd_dist)

    v = sub.add_parser("verify", help="seeded self-check of every invariant")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--trials", type=int, default=20)
    v.add_argument("--max-q", type=int, default=3)
    v.add_argument("--max-dim", type=int, default=9, help="largest k*m of random instances")
    v.add_argument("--only", help="comma-separated property names")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    if args.command == "gabidulin" and args.action == "mrd-construct":
        missing = [f"-{x}" for x in "qmkd" if getattr(args, x) is None]
        if missing:
            parser.error(f"mrd-construct needs {' '.join(missing)}")
    if args.command == "gabidulin" and args.action in ("expand", "dual") and args.file is None:
        parser.error(f"gabidulin {args.action} needs a code file")
    try:
        return args.func(args)
    except CodeFileError as exc:
        print(f"rankcode: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except FieldError as exc:
        print(f"rankcode: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except BudgetExceeded as exc:
        print(f"rankcode: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (UsageError, ValueError) as exc:
        print(f"rankcode: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
