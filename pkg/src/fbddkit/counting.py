"""Model counts and satisfaction probabilities by one bottom-up pass.

Probabilities stay exact when every weight is an ``int`` or ``Fraction``;
a single float weight makes the result a float.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

from .dag import CircuitDag, Decision, NoOp, Sink, topological_order

Weights = Mapping[int, "Fraction | float | int"]


class MissingWeightError(KeyError):
    def __init__(self, var: int):
        super().__init__(f"no probability for variable {var}")
        self.var = var


class InexactCountError(ArithmeticError):
    """A count division left a remainder: the DAG is not read-once / decomposable."""


def _check_weights(dag: CircuitDag, w: Weights) -> None:
    for v in sorted(dag.universe | dag.tested_vars()):
        if v not in w:
            raise MissingWeightError(v)
        if not 0 <= w[v] <= 1:
            raise ValueError(f"probability of variable {v} is {w[v]}")


def _prob(dag: CircuitDag, w: Weights, allow_and: bool):
    _check_weights(dag, w)
    val: dict[int, object] = {}
    for u in topological_order(dag, from_root=True):
        node = dag.nodes[u]
        if isinstance(node, Decision):
            p = w[node.var]
            val[u] = (1 - p) * val[node.lo] + p * val[node.hi]
        elif isinstance(node, Sink):
            val[u] = Fraction(node.value)
        elif isinstance(node, NoOp):
            val[u] = val[node.child]
        elif allow_and:
            acc = Fraction(1)
            for c in node.children:
                acc = acc * val[c]
            val[u] = acc
        else:
            raise ValueError("AND node in an FBDD; use prob_dnnf")
    return val[dag.root]


def prob_fbdd(dag: CircuitDag, w: Weights):
    """Probability that the FBDD evaluates to 1 under independent variable weights."""
    return _prob(dag, w, allow_and=False)


def prob_dnnf(dag: CircuitDag, w: Weights):
    """Same as ``prob_fbdd`` with AND nodes multiplying their (variable-disjoint) children."""
    return _prob(dag, w, allow_and=True)


def _count(dag: CircuitDag, universe: Iterable[int] | None, allow_and: bool) -> int:
    uni = dag.universe if universe is None else frozenset(universe)
    extra = dag.tested_vars() - uni
    if extra:
        raise ValueError(f"tested variables {sorted(extra)} outside universe")
    full = 1 << len(uni)
    val: dict[int, int] = {}
    for u in topological_order(dag, from_root=True):
        node = dag.nodes[u]
        if isinstance(node, Decision):
            total = val[node.lo] + val[node.hi]
            if total & 1:
                raise InexactCountError(f"odd sum at decision node {u}")
            val[u] = total >> 1
        elif isinstance(node, Sink):
            val[u] = full if node.value else 0
        elif isinstance(node, NoOp):
            val[u] = val[node.child]
        elif allow_and:
            acc = full
            for c in node.children:
                q, r = divmod(acc * val[c], full)
                if r:
                    raise InexactCountError(f"inexact product at AND node {u}")
                acc = q
            val[u] = acc
        else:
            raise ValueError("AND node in an FBDD; use count_dnnf")
    return val[dag.root]


def count_fbdd(dag: CircuitDag, universe: Iterable[int] | None = None) -> int:
    """Exact number of satisfying assignments over ``universe`` (default: the DAG's)."""
    return _count(dag, universe, allow_and=False)


def count_dnnf(dag: CircuitDag, universe: Iterable[int] | None = None) -> int:
    return _count(dag, universe, allow_and=True)


def uniform(universe: Iterable[int], p=Fraction(1, 2)) -> dict[int, Fraction]:
    return {v: p for v in universe}
