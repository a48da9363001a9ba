"""DPLL-style compilation of DNF/CNF into decision-DNNF.

A CNF residual is split into clause sets over disjoint variables; a DNF
residual is split when its term set is a product of term sets over disjoint
variables.  The parts are joined by AND nodes.  Residuals are cached on their
(sorted, subsumption-free) term/clause set, with no renaming.  Constant
residuals become the shared 0-sink and 1-sink; ``normalize`` un-shares them.
"""

from __future__ import annotations

import enum
import sys
from collections import Counter
from typing import Iterable

from .dag import CircuitDag, DagBuilder, Flavor, NodeId
from .formulas import CnfFormula, DnfFormula, remove_subsumed

Groups = frozenset  # frozenset[frozenset[int]]


class Heuristic(enum.Enum):
    FIXED_ORDER = "fixed"
    MOST_FREQUENT = "frequent"


def is_monotone_kdnf(f: DnfFormula) -> tuple[bool, int]:
    """(no negated literal, widest term left after dropping subsumed terms)."""
    monotone = all(x > 0 for t in f.terms for x in t)
    k = max((len(t) for t in remove_subsumed(f.terms)), default=0)
    return monotone, k


def _assign(groups: Groups, lit: int, is_dnf: bool):
    """Residual after making ``lit`` true.  Returns a bool for a constant."""
    out = []
    for g in groups:
        if lit in g:
            if is_dnf:
                g = g - {lit}
                if not g:
                    return True
            else:
                continue
        elif -lit in g:
            if is_dnf:
                continue
            g = g - {-lit}
            if not g:
                return False
        out.append(g)
    if not out:
        return not is_dnf
    return frozenset(remove_subsumed(out))


def _components(groups: Groups) -> list[Groups]:
    parent: dict[int, int] = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in groups:
        vs = [abs(x) for x in g]
        for v in vs:
            parent.setdefault(v, v)
        for v in vs[1:]:
            ra, rb = find(vs[0]), find(v)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    parts: dict[int, list] = {}
    for g in groups:
        parts.setdefault(find(abs(next(iter(g)))), []).append(g)
    return [frozenset(parts[r]) for r in sorted(parts)]


def _pick(groups: Groups, heuristic: Heuristic) -> int:
    if heuristic is Heuristic.FIXED_ORDER:
        return min(abs(x) for g in groups for x in g)
    freq = Counter(abs(x) for g in groups for x in g)
    return min(freq, key=lambda v: (-freq[v], v))


def _project(terms: Iterable[frozenset[int]], block: frozenset[int]) -> frozenset:
    return frozenset(frozenset(x for x in t if abs(x) in block) for t in terms)


def _dnf_factors(terms: Groups) -> list[Groups]:
    """Split a term set into a product of variable-disjoint term sets.

    Variables whose (absent / positive / negative) states are statistically
    dependent across the terms must share a factor; the resulting blocks are
    accepted only if the product of their projections has exactly |terms|
    elements, which proves the term set is that product.
    """
    if len(terms) == 1:
        (t,) = terms
        return [frozenset([frozenset([x])]) for x in sorted(t, key=abs)]
    vs = sorted({abs(x) for t in terms for x in t})
    tl = list(terms)
    states = {v: [(v in t) - (-v in t) for t in tl] for v in vs}
    parent = {v: v for v in vs}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    size = len(tl)
    marg = {v: Counter(states[v]) for v in vs}
    for i, y in enumerate(vs):
        for z in vs[i + 1:]:
            if find(y) == find(z):
                continue
            joint = Counter(zip(states[y], states[z]))
            if any(joint[(a, b)] * size != marg[y][a] * marg[z][b]
                   for a in marg[y] for b in marg[z]):
                parent[max(find(y), find(z))] = min(find(y), find(z))
    blocks: dict[int, set] = {}
    for v in vs:
        blocks.setdefault(find(v), set()).add(v)
    if len(blocks) == 1:
        return [terms]
    factors = [_project(tl, frozenset(blocks[r])) for r in sorted(blocks)]
    prod = 1
    for f in factors:
        prod *= len(f)
    if prod == size:
        return factors
    # pairwise independence was not enough; peel off any single block that splits
    for r in sorted(blocks):
        blk = frozenset(blocks[r])
        head = _project(tl, blk)
        rest = _project(tl, frozenset(vs) - blk)
        if len(head) * len(rest) == size:
            return [head] + _dnf_factors(rest)
    return [terms]


class _Compiler:
    def __init__(self, is_dnf: bool, heuristic: Heuristic, use_cache: bool):
        self.is_dnf = is_dnf
        self.heuristic = heuristic
        self.use_cache = use_cache
        self.b = DagBuilder()
        self.zero = self.b.sink(0)
        self.one = self.b.sink(1)
        self.cache: dict[Groups, NodeId] = {}

    def const(self, value: bool) -> NodeId:
        return self.one if value else self.zero

    def residual(self, groups: Groups) -> NodeId:
        if self.use_cache and groups in self.cache:
            return self.cache[groups]
        # CNF components are conjoined; a DNF is conjunctive only when it factors
        parts = _dnf_factors(groups) if self.is_dnf else _components(groups)
        node = self.split(parts) if len(parts) > 1 else self.branch(groups)
        if self.use_cache:
            self.cache[groups] = node
        return node

    def split(self, parts: list[Groups]) -> NodeId:
        top = self.residual(parts[-1])
        for part in reversed(parts[:-1]):
            top = self.b.and_(self.residual(part), top)
        return top

    def branch(self, groups: Groups) -> NodeId:
        v = _pick(groups, self.heuristic)
        kids = []
        for lit in (-v, v):
            r = _assign(groups, lit, self.is_dnf)
            kids.append(self.const(r) if isinstance(r, bool) else self.residual(r))
        return self.b.decision(v, kids[0], kids[1])


def _initial(groups: Iterable[frozenset[int]], is_dnf: bool):
    groups = list(groups)
    if not groups:
        return not is_dnf
    if any(not g for g in groups):
        return is_dnf
    return frozenset(remove_subsumed(groups))


def compile_formula(f: DnfFormula | CnfFormula, heuristic: Heuristic = Heuristic.MOST_FREQUENT,
                    use_cache: bool = True) -> CircuitDag:
    """Decision-DNNF equivalent to ``f`` over the same universe."""
    is_dnf = isinstance(f, DnfFormula)
    groups = f.terms if is_dnf else f.clauses
    c = _Compiler(is_dnf, heuristic, use_cache)
    start = _initial(groups, is_dnf)
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 10_000))
    try:
        root = c.const(start) if isinstance(start, bool) else c.residual(start)
    finally:
        sys.setrecursionlimit(old)
    # the builder always holds both sinks; keep them for stable numbering
    return c.b.build(root, Flavor.DECISION_DNNF, f.universe, f.names)
