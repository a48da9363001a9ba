"""Brute-force ground truth.

Assignments over a universe are enumerated in lexicographic order of the
sorted variable indices, the smallest variable being the most significant
position.  Enumeration is bit-sliced: a block of ``2**CHUNK_BITS``
consecutive assignments is evaluated at once, one Python int per node
holding one bit per assignment.
"""

from __future__ import annotations

from collections import deque
from typing import Callable, Iterable, Iterator, Mapping, Union

from .dag import And, CircuitDag, Decision, NoOp, NodeId, Sink, topological_order
from .formulas import CnfFormula, DnfFormula

Assignment = dict[int, int]
NativeFunction = Callable[[Mapping[int, int]], int]
Function = Union[CircuitDag, DnfFormula, CnfFormula, NativeFunction]

DEFAULT_CAP = 24
CHUNK_BITS = 16


class CapExceeded(ValueError):
    pass


def eval_dag(dag: CircuitDag, a: Mapping[int, int]) -> int:
    """Value of ``dag`` under ``a``.  AND nodes need every child to be 1."""
    memo: dict[NodeId, int] = {}
    for u in topological_order(dag, from_root=True):
        node = dag.nodes[u]
        if isinstance(node, Decision):
            if node.var not in a:
                raise KeyError(f"variable {node.var} missing from assignment")
            memo[u] = memo[node.hi] if a[node.var] else memo[node.lo]
        elif isinstance(node, Sink):
            memo[u] = node.value
        elif isinstance(node, NoOp):
            memo[u] = memo[node.child]
        else:
            memo[u] = int(all(memo[c] for c in node.children))
    return memo[dag.root]


def eval_formula(f: DnfFormula | CnfFormula, a: Mapping[int, int]) -> int:
    def lit(x):
        return a[x] if x > 0 else 1 - a[-x]
    if isinstance(f, DnfFormula):
        return int(any(all(lit(x) for x in t) for t in f.terms))
    return int(all(any(lit(x) for x in c) for c in f.clauses))


def evaluate(f: Function, a: Mapping[int, int]) -> int:
    if isinstance(f, CircuitDag):
        return eval_dag(f, a)
    if isinstance(f, (DnfFormula, CnfFormula)):
        return eval_formula(f, a)
    return int(f(a))


def default_universe(f: Function) -> frozenset[int]:
    if isinstance(f, (CircuitDag, DnfFormula, CnfFormula)):
        return f.universe
    raise ValueError("a universe is required for native functions")


def assignment_at(order: list[int], index: int) -> Assignment:
    n = len(order)
    return {v: (index >> (n - 1 - k)) & 1 for k, v in enumerate(order)}


def iter_assignments(universe: Iterable[int]) -> Iterator[Assignment]:
    order = sorted(universe)
    for i in range(1 << len(order)):
        yield assignment_at(order, i)


# ------------------------------------------------------------ bit slicing

class _Slicer:
    def __init__(self, universe: Iterable[int], cap: int):
        self.order = sorted(universe)
        n = len(self.order)
        if n > cap:
            raise CapExceeded(f"{n} variables exceed the enumeration cap of {cap}")
        self.n = n
        self.c = min(n, CHUNK_BITS)
        self.width = 1 << self.c
        self.full = (1 << self.width) - 1
        self.low: dict[int, int] = {}
        for k in range(n - self.c, n):
            shift = n - 1 - k
            half = 1 << shift
            unit = ((1 << half) - 1) << half
            self.low[self.order[k]] = unit * (self.full // ((1 << (2 * half)) - 1))

    def chunks(self) -> Iterator[tuple[int, dict[int, int]]]:
        high = self.order[: self.n - self.c]
        for h in range(1 << len(high)):
            tables = dict(self.low)
            for k, v in enumerate(high):
                tables[v] = self.full if (h >> (len(high) - 1 - k)) & 1 else 0
            yield h * self.width, tables


def _table(f: Function, tables: dict[int, int], full: int, base: int, order: list[int]) -> int:
    if isinstance(f, CircuitDag):
        val: dict[NodeId, int] = {}
        for u in topological_order(f, from_root=True):
            node = f.nodes[u]
            if isinstance(node, Decision):
                x = tables[node.var]
                val[u] = (val[node.lo] & (x ^ full)) | (val[node.hi] & x)
            elif isinstance(node, Sink):
                val[u] = full if node.value else 0
            elif isinstance(node, NoOp):
                val[u] = val[node.child]
            else:
                acc = full
                for c in node.children:
                    acc &= val[c]
                val[u] = acc
        return val[f.root]

    def lit(x):
        return tables[x] if x > 0 else tables[-x] ^ full

    if isinstance(f, DnfFormula):
        out = 0
        for t in f.terms:
            acc = full
            for x in t:
                acc &= lit(x)
            out |= acc
        return out
    if isinstance(f, CnfFormula):
        out = full
        for cl in f.clauses:
            acc = 0
            for x in cl:
                acc |= lit(x)
            out &= acc
        return out
    out = 0
    for i in range(full.bit_length()):
        if f(assignment_at(order, base + i)):
            out |= 1 << i
    return out


def _check_support(f: Function, universe: frozenset[int]) -> None:
    if isinstance(f, CircuitDag):
        support = f.tested_vars()
    elif isinstance(f, DnfFormula):
        support = frozenset(abs(x) for t in f.terms for x in t)
    elif isinstance(f, CnfFormula):
        support = frozenset(abs(x) for c in f.clauses for x in c)
    else:
        return
    extra = support - universe
    if extra:
        raise ValueError(f"variables {sorted(extra)} outside the enumeration universe")


def brute_count(f: Function, universe: Iterable[int] | None = None, cap: int = DEFAULT_CAP) -> int:
    """Number of satisfying assignments by exhaustive enumeration."""
    uni = default_universe(f) if universe is None else frozenset(universe)
    _check_support(f, uni)
    s = _Slicer(uni, cap)
    return sum(_table(f, t, s.full, base, s.order).bit_count() for base, t in s.chunks())


def find_counterexample(f: Function, g: Function, universe: Iterable[int] | None = None,
                        cap: int = DEFAULT_CAP) -> Assignment | None:
    """First assignment (lexicographically) on which ``f`` and ``g`` differ, else None."""
    uni = default_universe(f) if universe is None else frozenset(universe)
    _check_support(f, uni)
    _check_support(g, uni)
    s = _Slicer(uni, cap)
    for base, t in s.chunks():
        diff = _table(f, t, s.full, base, s.order) ^ _table(g, t, s.full, base, s.order)
        if diff:
            return assignment_at(s.order, base + (diff & -diff).bit_length() - 1)
    return None


def equivalent(f: Function, g: Function, universe: Iterable[int] | None = None,
               cap: int = DEFAULT_CAP) -> bool:
    return find_counterexample(f, g, universe, cap) is None


def naive_count(f: Function, universe: Iterable[int] | None = None, cap: int = 16) -> int:
    """One assignment at a time; used to cross-check the bit-sliced path."""
    uni = default_universe(f) if universe is None else frozenset(universe)
    if len(uni) > cap:
        raise CapExceeded(f"{len(uni)} variables exceed the enumeration cap of {cap}")
    return sum(evaluate(f, a) for a in iter_assignments(uni))


# ------------------------------------------------------ light-edge sets

def light_edge_sets(dag: CircuitDag, light_child: Mapping[NodeId, NodeId]) -> dict[NodeId, set[frozenset[NodeId]]]:
    """All distinct sets of light edges over root-to-node paths, by forward propagation.

    ``light_child`` maps each AND node to its light child.  Sets are unordered.
    """
    order = topological_order(dag, from_root=True)[::-1]
    sets: dict[NodeId, set[frozenset[NodeId]]] = {u: set() for u in order}
    sets[dag.root].add(frozenset())
    for u in order:
        node = dag.nodes[u]
        for c in node.children:
            if isinstance(node, And) and light_child[u] == c:
                sets[c].update(s | {u} for s in sets[u])
            else:
                sets[c].update(sets[u])
    return sets


def paths_to(dag: CircuitDag, target: NodeId) -> Iterator[list[NodeId]]:
    """Every root-to-``target`` path (exponentially many in general)."""
    stack = deque([[dag.root]])
    while stack:
        path = stack.pop()
        u = path[-1]
        if u == target:
            yield path
            continue
        for c in dag.nodes[u].children:
            stack.append(path + [c])
