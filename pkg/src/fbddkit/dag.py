"""DAG representation shared by FBDDs, FBDDs with no-op nodes and decision-DNNFs.

Nodes live in a flat tuple and refer to their children by index.  A
``CircuitDag`` is immutable; every transformation returns a new one.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Union

NodeId = int


@dataclass(frozen=True, slots=True)
class Decision:
    var: int
    lo: NodeId
    hi: NodeId

    @property
    def children(self) -> tuple[NodeId, ...]:
        return (self.lo, self.hi)


@dataclass(frozen=True, slots=True)
class And:
    children: tuple[NodeId, ...]


@dataclass(frozen=True, slots=True)
class NoOp:
    child: NodeId

    @property
    def children(self) -> tuple[NodeId, ...]:
        return (self.child,)


@dataclass(frozen=True, slots=True)
class Sink:
    value: int

    @property
    def children(self) -> tuple[NodeId, ...]:
        return ()


Node = Union[Decision, And, NoOp, Sink]


class Flavor(enum.Enum):
    FBDD = "fbdd"
    FBDD_NOOPS = "fbdd-noops"
    DECISION_DNNF = "decision-dnnf"
    AND_FBDD = "and-fbdd"


_ALLOWED = {
    Flavor.FBDD: (Decision, Sink),
    Flavor.FBDD_NOOPS: (Decision, Sink, NoOp),
    Flavor.DECISION_DNNF: (Decision, Sink, And),
    Flavor.AND_FBDD: (Decision, Sink, And),
}


class CycleError(ValueError):
    def __init__(self, cycle: tuple[NodeId, ...]):
        super().__init__(f"cycle through nodes {list(cycle)}")
        self.cycle = cycle


@dataclass(frozen=True)
class CircuitDag:
    nodes: tuple[Node, ...]
    root: NodeId
    universe: frozenset[int]
    flavor: Flavor
    names: Mapping[int, str] = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "universe", frozenset(self.universe))
        n = len(self.nodes)
        if not 0 <= self.root < n:
            raise ValueError(f"root {self.root} out of range")
        for i, node in enumerate(self.nodes):
            for c in node.children:
                if not 0 <= c < n:
                    raise ValueError(f"node {i} refers to missing node {c}")

    def __len__(self) -> int:
        return len(self.nodes)

    def with_flavor(self, flavor: Flavor) -> "CircuitDag":
        return replace(self, flavor=flavor)

    def tested_vars(self) -> frozenset[int]:
        return frozenset(n.var for n in self.nodes if isinstance(n, Decision))

    def var_name(self, var: int) -> str:
        return self.names.get(var, f"x{var}")


class DagBuilder:
    """Append-only node store used by every constructor in the package."""

    def __init__(self):
        self.nodes: list[Node | None] = []

    def add(self, node: Node) -> NodeId:
        self.nodes.append(node)
        return len(self.nodes) - 1

    def reserve(self) -> NodeId:
        self.nodes.append(None)
        return len(self.nodes) - 1

    def set(self, i: NodeId, node: Node) -> None:
        self.nodes[i] = node

    def sink(self, value: int) -> NodeId:
        return self.add(Sink(int(value)))

    def decision(self, var: int, lo: NodeId, hi: NodeId) -> NodeId:
        return self.add(Decision(var, lo, hi))

    def and_(self, *children: NodeId) -> NodeId:
        return self.add(And(tuple(children)))

    def noop(self, child: NodeId) -> NodeId:
        return self.add(NoOp(child))

    def build(self, root: NodeId, flavor: Flavor, universe: Iterable[int] | None = None,
              names: Mapping[int, str] | None = None) -> CircuitDag:
        if any(n is None for n in self.nodes):
            raise ValueError("reserved node never filled")
        if universe is None:
            universe = {n.var for n in self.nodes if isinstance(n, Decision)}
        return CircuitDag(tuple(self.nodes), root, frozenset(universe), flavor, dict(names or {}))


# ---------------------------------------------------------------- traversal

def topological_order(dag: CircuitDag, from_root: bool = False) -> list[NodeId]:
    """Children before parents.  Covers every node unless ``from_root``."""
    nodes = dag.nodes
    state = bytearray(len(nodes))  # 0 new, 1 on stack, 2 done
    order: list[NodeId] = []
    starts = [dag.root] if from_root else range(len(nodes))
    for start in starts:
        if state[start]:
            continue
        stack = [(start, iter(nodes[start].children))]
        state[start] = 1
        while stack:
            u, it = stack[-1]
            for c in it:
                if state[c] == 0:
                    state[c] = 1
                    stack.append((c, iter(nodes[c].children)))
                    break
                if state[c] == 1:
                    path = [v for v, _ in stack]
                    raise CycleError(tuple(path[path.index(c):]) + (c,))
            else:
                stack.pop()
                state[u] = 2
                order.append(u)
    return order


def reachable(dag: CircuitDag) -> list[NodeId]:
    """Nodes reachable from the root, in breadth-first order."""
    seen = {dag.root}
    order = [dag.root]
    queue = deque(order)
    while queue:
        u = queue.popleft()
        for c in dag.nodes[u].children:
            if c not in seen:
                seen.add(c)
                order.append(c)
                queue.append(c)
    return order


def _var_masks(dag: CircuitDag, order: list[NodeId]) -> list[int]:
    masks = [0] * len(dag.nodes)
    for u in order:
        node = dag.nodes[u]
        m = 0
        for c in node.children:
            m |= masks[c]
        if isinstance(node, Decision):
            m |= 1 << node.var
        masks[u] = m
    return masks


def _unmask(m: int) -> frozenset[int]:
    out = []
    while m:
        low = m & -m
        out.append(low.bit_length() - 1)
        m ^= low
    return frozenset(out)


def vars_below(dag: CircuitDag) -> dict[NodeId, frozenset[int]]:
    """Variables tested in the sub-DAG rooted at each node.  Raises CycleError."""
    order = topological_order(dag)
    masks = _var_masks(dag, order)
    return {u: _unmask(masks[u]) for u in range(len(dag.nodes))}


# --------------------------------------------------------------- validation

class Rule(enum.Enum):
    ACYCLIC = "acyclic"
    NODE_KIND = "node-kind"
    READ_ONCE = "read-once"
    DECOMPOSABLE = "decomposability"
    UNIVERSE = "universe"


@dataclass(frozen=True)
class Violation:
    rule: Rule
    witness: tuple
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self) -> str:
        if self.ok:
            return "ok"
        return "\n".join(f"{v.rule.value}: {v.detail} witness={list(v.witness)}"
                         for v in self.violations)


class ValidationError(ValueError):
    def __init__(self, report: ValidationReport):
        super().__init__(str(report))
        self.report = report


def _path_between(dag: CircuitDag, src: NodeId, dst: NodeId) -> list[NodeId] | None:
    parent = {src: None}
    queue = deque([src])
    while queue:
        u = queue.popleft()
        if u == dst:
            path = []
            while u is not None:
                path.append(u)
                u = parent[u]
            return path[::-1]
        for c in dag.nodes[u].children:
            if c not in parent:
                parent[c] = u
                queue.append(c)
    return None


def _path_to_var(dag: CircuitDag, start: NodeId, var: int, masks: list[int]) -> list[NodeId]:
    bit = 1 << var
    path = [start]
    u = start
    while not (isinstance(dag.nodes[u], Decision) and dag.nodes[u].var == var):
        u = next(c for c in dag.nodes[u].children if masks[c] & bit)
        path.append(u)
    return path


def validate(dag: CircuitDag, flavor: Flavor | None = None) -> ValidationReport:
    """Structural check against ``flavor`` (defaults to the DAG's own)."""
    flavor = flavor or dag.flavor
    try:
        order = topological_order(dag)
    except CycleError as e:
        return ValidationReport((Violation(Rule.ACYCLIC, e.cycle, "cycle"),))

    out: list[Violation] = []
    allowed = _ALLOWED[flavor]
    masks = _var_masks(dag, order)
    for u, node in enumerate(dag.nodes):
        if not isinstance(node, allowed):
            out.append(Violation(Rule.NODE_KIND, (u,),
                                 f"{type(node).__name__} node not allowed in {flavor.value}"))
        if isinstance(node, Sink) and node.value not in (0, 1):
            out.append(Violation(Rule.NODE_KIND, (u,), f"sink label {node.value}"))
        if isinstance(node, Decision):
            if node.var < 1 or node.var not in dag.universe:
                out.append(Violation(Rule.UNIVERSE, (u,), f"variable {node.var} outside universe"))
            bit = 1 << node.var
            for c in node.children:
                if masks[c] & bit:
                    head = _path_between(dag, dag.root, u) or [u]
                    tail = _path_to_var(dag, c, node.var, masks)
                    out.append(Violation(Rule.READ_ONCE, tuple(head + tail),
                                         f"variable {node.var} tested twice"))
                    break
        if isinstance(node, And) and flavor is Flavor.DECISION_DNNF:
            seen = 0
            for i, c in enumerate(node.children):
                if masks[c] & seen:
                    shared = _unmask(masks[c] & seen)
                    other = next(d for d in node.children[:i] if masks[d] & masks[c])
                    out.append(Violation(Rule.DECOMPOSABLE, (u, other, c),
                                         f"children share variables {sorted(shared)}"))
                    break
                seen |= masks[c]
    return ValidationReport(tuple(out))


def is_normalized(dag: CircuitDag) -> bool:
    """Binary ANDs, every 1-sink with at most one incoming edge, no unreachable nodes."""
    live = reachable(dag)
    if len(live) != len(dag.nodes):
        return False
    indegree = [0] * len(dag.nodes)
    for node in dag.nodes:
        if isinstance(node, And) and len(node.children) != 2:
            return False
        for c in node.children:
            indegree[c] += 1
    return all(indegree[u] <= 1 for u, n in enumerate(dag.nodes)
               if isinstance(n, Sink) and n.value == 1)


# ------------------------------------------------------------ normalization

def normalize(dag: CircuitDag) -> CircuitDag:
    """Binary ANDs (right-deep chains, child order kept) and private 1-sinks.

    Raises ValidationError if the input is not a decision-DNNF.
    """
    report = validate(dag, Flavor.DECISION_DNNF)
    if not report.ok:
        raise ValidationError(report)
    if is_normalized(dag):
        return dag if dag.flavor is Flavor.DECISION_DNNF else dag.with_flavor(Flavor.DECISION_DNNF)

    nodes = dag.nodes
    b = DagBuilder()
    new_id: dict[NodeId, NodeId] = {}

    def resolve(u: NodeId) -> NodeId | None:
        # collapses unary ANDs; None means "a 1-sink"
        while isinstance(nodes[u], And) and len(nodes[u].children) == 1:
            u = nodes[u].children[0]
        node = nodes[u]
        if (isinstance(node, Sink) and node.value == 1) or (isinstance(node, And) and not node.children):
            return None
        return u

    def ref(u: NodeId) -> NodeId:
        r = resolve(u)
        return b.sink(1) if r is None else new_id[r]

    for u in topological_order(dag, from_root=True):
        if resolve(u) != u:
            continue
        node = nodes[u]
        if isinstance(node, Sink):
            new_id[u] = b.sink(0)
        elif isinstance(node, Decision):
            lo = ref(node.lo)
            hi = ref(node.hi)
            new_id[u] = b.decision(node.var, lo, hi)
        else:
            kids = node.children
            top = ref(kids[-1])
            for c in reversed(kids[:-1]):
                left = ref(c)
                top = b.and_(left, top)
            new_id[u] = top
    root = ref(dag.root)
    return b.build(root, Flavor.DECISION_DNNF, dag.universe, dag.names)


def eliminate_noops(dag: CircuitDag) -> CircuitDag:
    """Contract no-op nodes onto their children; drop unreachable nodes."""
    nodes = dag.nodes
    if any(isinstance(n, And) for n in nodes):
        raise ValueError("eliminate_noops expects an FBDD with no-op nodes")
    target: dict[NodeId, NodeId] = {}

    def chase(u: NodeId) -> NodeId:
        chain = []
        on_chain = set()
        while isinstance(nodes[u], NoOp) and u not in target:
            if u in on_chain:
                raise CycleError(tuple(chain[chain.index(u):]) + (u,))
            on_chain.add(u)
            chain.append(u)
            u = nodes[u].child
        end = target.get(u, u)
        for v in chain:
            target[v] = end
        return end

    root = chase(dag.root)
    new_id = {root: 0}
    order = [root]
    queue = deque(order)
    while queue:
        u = queue.popleft()
        for c in nodes[u].children:
            c = chase(c)
            if c not in new_id:
                new_id[c] = len(order)
                order.append(c)
                queue.append(c)
    out: list[Node] = []
    for u in order:
        node = nodes[u]
        if isinstance(node, Decision):
            out.append(Decision(node.var, new_id[chase(node.lo)], new_id[chase(node.hi)]))
        else:
            out.append(node)
    result = CircuitDag(tuple(out), 0, dag.universe, Flavor.FBDD, dag.names)
    topological_order(result)  # a decision cycle survives contraction; reject it
    return result


# ---------------------------------------------------------------- isomorphism

def isomorphic(a: CircuitDag, b: CircuitDag, check_universe: bool = True) -> bool:
    """Rooted, child-order-respecting isomorphism of the reachable parts."""
    if check_universe and a.universe != b.universe:
        return False
    fwd: dict[NodeId, NodeId] = {}
    bwd: dict[NodeId, NodeId] = {}
    stack = [(a.root, b.root)]
    while stack:
        u, v = stack.pop()
        if u in fwd or v in bwd:
            if fwd.get(u) != v or bwd.get(v) != u:
                return False
            continue
        fwd[u] = v
        bwd[v] = u
        x, y = a.nodes[u], b.nodes[v]
        if type(x) is not type(y):
            return False
        if isinstance(x, Sink) and x.value != y.value:
            return False
        if isinstance(x, Decision) and x.var != y.var:
            return False
        if len(x.children) != len(y.children):
            return False
        stack.extend(zip(x.children, y.children))
    return True
