"""Command-line entry point.  Exit codes: 0 success, 1 validation/equivalence failure, 2 usage."""

from __future__ import annotations

import argparse
import csv
import logging
import sys
from pathlib import Path

from . import io as fio
from .compiler import Heuristic, compile_formula
from .convert import convert
from .counting import count_dnnf, count_fbdd, prob_dnnf, prob_fbdd
from .dag import Flavor, ValidationError, validate
from .formulas import CnfFormula, DnfFormula
from .generators import gen_phi, gen_psi, gen_psi_dual, gen_tight_example, gen_triangle
from .lineage import ground, hierarchical
from .oracle import CapExceeded, equivalent

log = logging.getLogger("fbddkit")


class Failure(Exception):
    """Reported as exit code 1."""


def _read(path: str) -> str:
    return Path(path).read_text()


def _write(path: str, text: str) -> None:
    Path(path).write_text(text)


def load(path: str, universe: int | None = None):
    """Parse a file by extension: .nnf, .fbdd, .dnf, .cnf."""
    text = _read(path)
    suffix = Path(path).suffix
    uni = range(1, universe + 1) if universe else None
    if suffix == ".nnf":
        dag = fio.parse_nnf(text)
        return dag if uni is None else _with_universe(dag, uni)
    if suffix == ".fbdd":
        return fio.parse_fbdd(text, uni)
    if suffix == ".dnf":
        return fio.parse_dnf(text)
    if suffix == ".cnf":
        return fio.parse_cnf(text)
    raise argparse.ArgumentTypeError(f"unknown file type {suffix!r} (want .nnf/.fbdd/.dnf/.cnf)")


def _with_universe(dag, uni):
    from dataclasses import replace
    return replace(dag, universe=frozenset(uni))


def _as_dag(obj, heuristic=Heuristic.MOST_FREQUENT):
    if isinstance(obj, (DnfFormula, CnfFormula)):
        return compile_formula(obj, heuristic)
    return obj


def cmd_validate(args) -> int:
    dag = _as_dag(load(args.file))
    report = validate(dag)
    print(report)
    return 0 if report.ok else 1


def cmd_convert(args) -> int:
    dag = _as_dag(load(args.input))
    result = convert(dag)
    _write(args.output, fio.write_fbdd(result.fbdd))
    if args.report:
        _write(args.report, fio.report_json(result.report))
    print(fio.report_json(result.report), end="")
    if not validate(result.fbdd).ok:
        raise Failure("converted FBDD failed read-once validation")
    if args.check:
        try:
            if not equivalent(dag, result.fbdd):
                raise Failure("conversion is not equivalent to its input")
        except CapExceeded as e:
            log.warning("skipping equivalence check: %s", e)
    return 0


def cmd_count(args) -> int:
    obj = load(args.file, args.universe)
    if isinstance(obj, (DnfFormula, CnfFormula)):
        dag = compile_formula(obj)
        print(count_dnnf(dag, range(1, args.universe + 1) if args.universe else None))
    elif obj.flavor is Flavor.DECISION_DNNF:
        print(count_dnnf(obj))
    else:
        print(count_fbdd(obj))
    return 0


def cmd_prob(args) -> int:
    dag = _as_dag(load(args.file))
    weights = fio.parse_weights(_read(args.weights), dag.universe | dag.tested_vars())
    p = prob_dnnf(dag, weights) if dag.flavor is Flavor.DECISION_DNNF else prob_fbdd(dag, weights)
    print(p if args.exact else float(p))
    return 0


def cmd_gen(args) -> int:
    fam, k = args.family, args.param
    if fam == "tight":
        _write(args.output, fio.write_nnf(gen_tight_example(k)))
    elif fam == "psi-dual":
        _write(args.output, fio.write_cnf(gen_psi_dual(k)))
    else:
        f = {"psi": gen_psi, "phi": gen_phi, "triangle": gen_triangle}[fam](k)
        if args.output.endswith(".nnf"):
            _write(args.output, fio.write_nnf(compile_formula(f)))
        else:
            _write(args.output, fio.write_dnf(f))
    return 0


def cmd_compile(args) -> int:
    f = load(args.input)
    if not isinstance(f, (DnfFormula, CnfFormula)):
        raise argparse.ArgumentTypeError("compile expects a .dnf or .cnf file")
    dag = compile_formula(f, Heuristic(args.heuristic))
    _write(args.output, fio.write_nnf(dag))
    return 0


def cmd_lineage(args) -> int:
    q = fio.parse_query(_read(args.query))
    db = fio.parse_db(_read(args.db))
    lin = ground(q, db)
    _write(args.output, fio.write_dnf(lin.formula))
    print(lin.formula.render())
    return 0


def cmd_hierarchical(args) -> int:
    print(hierarchical(fio.parse_query(_read(args.query))))
    return 0


def _range(text: str) -> range:
    try:
        a, b = text.split("..")
        return range(int(a), int(b) + 1)
    except ValueError:
        raise argparse.ArgumentTypeError(f"range must look like 2..4, got {text!r}") from None


def bench_rows(family: str, params: range):
    for k in params:
        if family == "tight":
            dag = gen_tight_example(k)
        else:
            dag = compile_formula(gen_phi(k))
        r = convert(dag).report
        yield {"family": family, "param": k, "N": r.N, "M": r.M, "L": r.L,
               "out_nodes": r.out_nodes_with_noops, "bound": r.bound}


def cmd_bench(args) -> int:
    with open(args.output, "w", newline="") as fh:
        w = csv.DictWriter(fh, ["family", "param", "N", "M", "L", "out_nodes", "bound"])
        w.writeheader()
        for row in bench_rows(args.family, args.range):
            w.writerow(row)
            fh.flush()
            log.info("%s", row)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fbddkit", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="check a .nnf/.fbdd file")
    s.add_argument("file")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("convert", help="decision-DNNF to FBDD")
    s.add_argument("input")
    s.add_argument("-o", "--output", required=True)
    s.add_argument("--report")
    s.add_argument("--check", action="store_true", help="brute-force equivalence (small inputs)")
    s.set_defaults(func=cmd_convert)

    s = sub.add_parser("count", help="exact model count")
    s.add_argument("file")
    s.add_argument("--universe", type=int, help="count over variables 1..N")
    s.set_defaults(func=cmd_count)

    s = sub.add_parser("prob", help="probability under independent weights")
    s.add_argument("file")
    s.add_argument("--weights", required=True)
    s.add_argument("--exact", action="store_true", help="print an exact fraction")
    s.set_defaults(func=cmd_prob)

    s = sub.add_parser("gen", help="write a formula family instance")
    s.add_argument("family", choices=["psi", "psi-dual", "phi", "triangle", "tight"])
    s.add_argument("param", type=int)
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("compile", help="DNF/CNF to decision-DNNF")
    s.add_argument("input")
    s.add_argument("-o", "--output", required=True)
    s.add_argument("--heuristic", choices=[h.value for h in Heuristic], default="frequent")
    s.set_defaults(func=cmd_compile)

    s = sub.add_parser("lineage", help="ground a query on a database")
    s.add_argument("query")
    s.add_argument("db")
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(func=cmd_lineage)

    s = sub.add_parser("hierarchical", help="hierarchical-query test")
    s.add_argument("query")
    s.set_defaults(func=cmd_hierarchical)

    s = sub.add_parser("bench", help="conversion sizes over a parameter range")
    s.add_argument("--family", choices=["phi", "tight"], required=True)
    s.add_argument("--range", type=_range, required=True)
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(func=cmd_bench)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:     # usage errors and --help
        return int(e.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except argparse.ArgumentTypeError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (Failure, ValidationError, fio.FormatError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
