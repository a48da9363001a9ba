"""Copies of the target node in the tight example, against M, for a range of p."""

import argparse
import csv
import math
import sys

from fbddkit.convert import convert
from fbddkit.dag import Decision
from fbddkit.generators import gen_tight_example, tight_binomial_as_printed, tight_layout, tight_path_count


def row(p: int) -> dict:
    conv = convert(gen_tight_example(p))
    var = tight_layout(p).target_var
    src = conv.source.dag
    (target,) = [i for i, n in enumerate(src.nodes) if isinstance(n, Decision) and n.var == var]
    copies = sum(1 for u, _ in conv.origin if u == target)
    r = conv.report
    return {
        "p": p, "N": r.N, "M": r.M, "L": r.L, "copies": copies,
        "stars_and_bars": tight_path_count(p), "printed_binomial": tight_binomial_as_printed(p),
        "log_copies_over_log_M": round(math.log(copies) / math.log(r.M), 4),
        "out_nodes_with_noops": r.out_nodes_with_noops, "out_nodes_final": r.out_nodes_final,
    }


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-p", type=int, default=4)
    ap.add_argument("-o", "--output", help="CSV file (default: stdout)")
    args = ap.parse_args()
    rows = [row(p) for p in range(1, args.max_p + 1)]
    fh = open(args.output, "w", newline="") if args.output else sys.stdout
    w = csv.DictWriter(fh, list(rows[0]))
    w.writeheader()
    w.writerows(rows)
    if args.output:
        fh.close()


if __name__ == "__main__":
    main()
