"""Decision-DNNF to FBDD conversion, exact counting, and lineage tooling."""

from .compiler import Heuristic, compile_formula, is_monotone_kdnf
from .convert import ConvertReport, classify_and_order, convert, max_ands_on_path, to_fbdd
from .counting import count_dnnf, count_fbdd, prob_dnnf, prob_fbdd
from .dag import (And, CircuitDag, DagBuilder, Decision, Flavor, NoOp, Sink, eliminate_noops,
                  isomorphic, normalize, validate, vars_below)
from .formulas import CnfFormula, DnfFormula, cnf, dnf
from .oracle import brute_count, equivalent, eval_dag, find_counterexample

__all__ = [
    "And", "CircuitDag", "CnfFormula", "ConvertReport", "DagBuilder", "Decision", "DnfFormula",
    "Flavor", "Heuristic", "NoOp", "Sink", "brute_count", "classify_and_order", "cnf",
    "compile_formula", "convert", "count_dnnf", "count_fbdd", "dnf", "eliminate_noops",
    "equivalent", "eval_dag", "find_counterexample", "is_monotone_kdnf", "isomorphic",
    "max_ands_on_path", "normalize", "prob_dnnf", "prob_fbdd", "to_fbdd", "validate", "vars_below",
]
