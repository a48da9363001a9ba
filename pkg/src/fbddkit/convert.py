"""Decision-DNNF to FBDD translation via (node, light-edge-set) product nodes.

Every AND node's children are ordered so that the first (light) child has no
more AND descendants than the second (heavy) child.  A product node ``(u, s)``
pairs an input node with the light edges taken on the way to it, in path
order.  A light edge is identified by the AND node it leaves, since each AND
node has exactly one.
"""

from __future__ import annotations

import enum
import math
from collections import deque
from dataclasses import dataclass, replace

from .dag import (And, CircuitDag, Decision, Flavor, Node, NodeId, NoOp, Sink,
                  eliminate_noops, is_normalized, normalize, topological_order)


class EdgeClass(enum.Enum):
    LIGHT = "light"
    HEAVY = "heavy"
    NEUTRAL = "neutral"


@dataclass(frozen=True)
class AndCounts:
    below: tuple[int, ...]   # AND nodes in the sub-DAG at each node
    total: int               # M
    light_depth: int         # L


@dataclass(frozen=True)
class Classified:
    dag: CircuitDag                                   # AND children reordered
    edges: dict[tuple[NodeId, int], EdgeClass]        # (parent, child slot) -> class
    counts: AndCounts

    def light_child(self, z: NodeId) -> NodeId:
        return self.dag.nodes[z].children[0]

    def heavy_child(self, z: NodeId) -> NodeId:
        return self.dag.nodes[z].children[1]


class LightEdgeOrderError(RuntimeError):
    """The same light-edge set was reached in two different path orders."""


@dataclass
class ConvertReport:
    N: int
    M: int
    L: int
    out_nodes_with_noops: int
    out_nodes_final: int
    bound: int
    quasipoly_bound: int

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in
                ("N", "M", "L", "out_nodes_with_noops", "out_nodes_final", "bound", "quasipoly_bound")}


@dataclass(frozen=True)
class Conversion:
    fbdd: CircuitDag                 # final FBDD
    with_noops: CircuitDag           # product construction output
    origin: tuple[tuple[NodeId, tuple[NodeId, ...]], ...]   # with_noops id -> (u, s)
    source: Classified
    report: ConvertReport


def quasipoly_bound(n: int) -> int:
    """``n * 2**floor(log2(n)**2)``; never above the real-valued bound."""
    return n * 2 ** math.floor(math.log2(n) ** 2) if n > 1 else n


def classify_and_order(dag: CircuitDag) -> Classified:
    """Count AND descendants, swap AND children so the light child is first, classify edges."""
    if not is_normalized(dag):
        raise ValueError("classify_and_order expects a normalized decision-DNNF")
    order = topological_order(dag)
    nodes = list(dag.nodes)
    and_mask = [0] * len(nodes)
    for u in order:
        node = nodes[u]
        m = 0
        for c in node.children:
            m |= and_mask[c]
        if isinstance(node, And):
            m |= 1 << u
        and_mask[u] = m
    below = [m.bit_count() for m in and_mask]

    edges: dict[tuple[NodeId, int], EdgeClass] = {}
    for u, node in enumerate(nodes):
        if isinstance(node, And):
            v1, v2 = node.children
            if below[v1] > below[v2]:
                nodes[u] = And((v2, v1))
            edges[(u, 0)] = EdgeClass.LIGHT
            edges[(u, 1)] = EdgeClass.HEAVY
        elif isinstance(node, Decision):
            edges[(u, 0)] = EdgeClass.NEUTRAL
            edges[(u, 1)] = EdgeClass.NEUTRAL

    depth = [0] * len(nodes)
    for u in order:
        node = nodes[u]
        if isinstance(node, And):
            depth[u] = max(depth[node.children[0]] + 1, depth[node.children[1]])
        elif node.children:
            depth[u] = max(depth[c] for c in node.children)
    ordered = replace(dag, nodes=tuple(nodes))
    total = sum(isinstance(n, And) for n in nodes)
    return Classified(ordered, edges, AndCounts(tuple(below), total, depth[dag.root]))


def to_fbdd(classified: Classified) -> tuple[CircuitDag, tuple]:
    """Breadth-first product construction from ``(root, ())``.

    Returns the FBDD with no-op nodes and, per output node, its ``(u, s)`` origin.
    """
    src = classified.dag.nodes
    index: dict[tuple[NodeId, frozenset], NodeId] = {}
    origin: list[tuple[NodeId, tuple[NodeId, ...]]] = []
    out: list[Node | None] = []
    queue: deque[NodeId] = deque()

    def visit(u: NodeId, s: tuple[NodeId, ...]) -> NodeId:
        key = (u, frozenset(s))
        hit = index.get(key)
        if hit is not None:
            if origin[hit][1] != s:
                raise LightEdgeOrderError(
                    f"node {u}: light edges {origin[hit][1]} also reached as {s}")
            return hit
        i = len(out)
        index[key] = i
        origin.append((u, s))
        out.append(None)
        queue.append(i)
        return i

    visit(classified.dag.root, ())
    while queue:
        i = queue.popleft()
        u, s = origin[i]
        node = src[u]
        if isinstance(node, Decision):
            out[i] = Decision(node.var, visit(node.lo, s), visit(node.hi, s))
        elif isinstance(node, And):
            out[i] = NoOp(visit(node.children[0], s + (u,)))
        elif node.value == 0:
            out[i] = Sink(0)
        elif not s:
            out[i] = Sink(1)
        else:
            # 1-sink under a light edge: continue at the heavy sibling of the last one
            z = s[-1]
            out[i] = NoOp(visit(src[z].children[1], s[:-1]))
    dag = classified.dag
    result = CircuitDag(tuple(out), 0, dag.universe, Flavor.FBDD_NOOPS, dag.names)
    return result, tuple(origin)


def convert(dag: CircuitDag) -> Conversion:
    """normalize -> classify_and_order -> to_fbdd -> eliminate_noops."""
    norm = normalize(dag)
    classified = classify_and_order(norm)
    with_noops, origin = to_fbdd(classified)
    final = eliminate_noops(with_noops)
    counts = classified.counts
    n = len(norm.nodes)
    report = ConvertReport(
        N=n, M=counts.total, L=counts.light_depth,
        out_nodes_with_noops=len(with_noops.nodes),
        out_nodes_final=len(final.nodes),
        bound=n * counts.total ** counts.light_depth,
        quasipoly_bound=quasipoly_bound(n),
    )
    return Conversion(final, with_noops, origin, classified, report)


def max_ands_on_path(dag: CircuitDag) -> int:
    """Largest number of AND nodes on any root-to-leaf path."""
    best = [0] * len(dag.nodes)
    for u in topological_order(dag, from_root=True):
        node = dag.nodes[u]
        below = max((best[c] for c in node.children), default=0)
        best[u] = below + isinstance(node, And)
    return best[dag.root]
