"""Text formats: c2d-style NNF, FBDD node lists, DIMACS CNF, DNF, weights, queries, databases.

FBDD format, one node per line, children referenced by 0-based line index
(comment lines ``c ...`` and blank lines are not counted), root last::

    S 0|1            sink
    D var lo hi      decision on var: lo on 0, hi on 1
    N child          no-op (only in FBDDs with no-op nodes)

DNF format mirrors DIMACS: ``p dnf <vars> <terms>`` then one term per line
ending in 0.  Both DIMACS-style formats accept ``c var <index> <name>``
comment lines to carry variable names.
"""

from __future__ import annotations

import csv
import io as _io
import json
import logging
import re
import shlex
import sys
from fractions import Fraction
from typing import Iterable

from .convert import ConvertReport
from .dag import (And, CircuitDag, DagBuilder, Decision, Flavor, NodeId, NoOp, Sink,
                  topological_order)
from .formulas import CnfFormula, DnfFormula, cnf, dnf
from .lineage import CQ, Atom, Const, DatabaseInstance, QVar, UcqQuery

log = logging.getLogger(__name__)


class FormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


def _content_lines(text: str, comment: str = "c"):
    for no, raw in enumerate(text.splitlines(), 1):
        s = raw.strip()
        if not s or s.split()[0] in (comment, "#") or s.startswith("#"):
            continue
        yield no, s


def _ints(tokens: list[str], no: int) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise FormatError(f"expected integers, got {' '.join(tokens)!r}", no) from None


# ---------------------------------------------------------------------- NNF

def parse_nnf(text: str) -> CircuitDag:
    """Read a c2d NNF file whose OR nodes all have decision form.

    ``O j 2 a b`` (j may be 0) must have one child carrying literal x and the
    other -x, either as the child itself or among the children of an AND.
    The literal is dropped and the rest becomes the decision branch.
    """
    lines = list(_content_lines(text))
    if not lines or lines[0][1].split()[0] != "nnf":
        raise FormatError("missing 'nnf v e n' header", lines[0][0] if lines else None)
    hno, header = lines[0]
    head = _ints(header.split()[1:], hno)
    if len(head) != 3:
        raise FormatError("header must be 'nnf v e n'", hno)
    n_nodes, n_edges, n_vars = head
    body = lines[1:]
    if len(body) != n_nodes:
        raise FormatError(f"header declares {n_nodes} nodes, file has {len(body)}", hno)

    raw: list[tuple[str, int, list[int], int]] = []   # kind, var/lit, children, line no
    edges = 0
    for idx, (no, s) in enumerate(body):
        tok = s.split()
        kind = tok[0]
        nums = _ints(tok[1:], no)
        if kind == "L":
            if len(nums) != 1 or nums[0] == 0 or abs(nums[0]) > n_vars:
                raise FormatError("bad literal", no)
            raw.append(("L", nums[0], [], no))
            continue
        if kind == "A":
            if not nums or nums[0] != len(nums) - 1:
                raise FormatError("A line must be 'A c i1 .. ic'", no)
            var, kids = 0, nums[1:]
        elif kind == "O":
            if len(nums) < 2 or nums[1] != len(nums) - 2:
                raise FormatError("O line must be 'O j c i1 .. ic'", no)
            var, kids = nums[0], nums[2:]
        else:
            raise FormatError(f"unknown node type {kind!r}", no)
        for c in kids:
            if not 0 <= c < idx:
                raise FormatError(f"reference to node {c} not defined before line", no)
        edges += len(kids)
        raw.append((kind, var, kids, no))
    if edges != n_edges:
        log.warning("header declares %d edges, file has %d", n_edges, edges)

    b = DagBuilder()
    zero = b.sink(0)
    memo: dict[tuple[int, int], NodeId] = {}   # (line index, removed literal) -> node

    def literal_of(i: int, x: int) -> bool:
        kind, val, kids, _ = raw[i]
        return (kind == "L" and val == x) or (kind == "A" and any(raw[c][0] == "L" and raw[c][1] == x for c in kids))

    def build(i: int, drop: int = 0) -> NodeId:
        key = (i, drop)
        if key in memo:
            return memo[key]
        kind, val, kids, no = raw[i]
        if kind == "L":
            if val == drop:
                node = b.sink(1)
            else:
                node = b.decision(abs(val), *((b.sink(1), zero) if val < 0 else (zero, b.sink(1))))
        elif kind == "A":
            rest = list(kids)
            if drop:
                rest.remove(next(c for c in kids if raw[c][0] == "L" and raw[c][1] == drop))
            built = [build(c) for c in rest]
            if not built:
                node = b.sink(1)
            elif len(built) == 1 and drop:
                node = built[0]
            else:
                node = b.and_(*built)
        else:
            if not kids:
                node = b.sink(0)
            else:
                if len(kids) != 2:
                    raise FormatError("OR node is not a decision (needs exactly 2 children)", no)
                cands = [val] if val else sorted(
                    {abs(raw[c][1]) for k in kids for c in ([k] + raw[k][2]) if raw[c][0] == "L"})
                for x in cands:
                    a, c = kids
                    if literal_of(a, -x) and literal_of(c, x):
                        lo, hi = a, c
                        break
                    if literal_of(a, x) and literal_of(c, -x):
                        lo, hi = c, a
                        break
                else:
                    raise FormatError("OR node is not a decision node (d-DNNF but not decision-DNNF)", no)
                node = b.decision(x, build(lo, -x), build(hi, x))
        memo[key] = node
        return node

    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 20_000))
    try:
        root = build(len(raw) - 1)
    finally:
        sys.setrecursionlimit(old)
    return b.build(root, Flavor.DECISION_DNNF, range(1, n_vars + 1))


def write_nnf(dag: CircuitDag) -> str:
    """c2d NNF for a DAG without no-op nodes; decisions become (-x & lo) | (x & hi)."""
    lines: list[str] = []
    idx: dict[object, int] = {}
    edges = 0

    def emit(key, line, n_kids):
        nonlocal edges
        idx[key] = len(lines)
        lines.append(line)
        edges += n_kids
        return idx[key]

    def lit(x):
        return idx[("L", x)] if ("L", x) in idx else emit(("L", x), f"L {x}", 0)

    for u in topological_order(dag, from_root=True):
        node = dag.nodes[u]
        if isinstance(node, Sink):
            emit(u, "A 0" if node.value else "O 0 0", 0)
        elif isinstance(node, Decision):
            x = node.var
            a0 = emit(("lo", u), f"A 2 {lit(-x)} {idx[node.lo]}", 2)
            a1 = emit(("hi", u), f"A 2 {lit(x)} {idx[node.hi]}", 2)
            emit(u, f"O {x} 2 {a0} {a1}", 2)
        elif isinstance(node, And):
            kids = " ".join(str(idx[c]) for c in node.children)
            emit(u, f"A {len(node.children)} {kids}".rstrip(), len(node.children))
        else:
            raise ValueError("no-op nodes cannot be written as NNF")
    n_vars = max(dag.universe | dag.tested_vars(), default=0)
    return "\n".join([f"nnf {len(lines)} {edges} {n_vars}"] + lines) + "\n"


# --------------------------------------------------------------------- FBDD

def parse_fbdd(text: str, universe: Iterable[int] | None = None) -> CircuitDag:
    nodes = []
    has_noop = False
    for no, s in _content_lines(text):
        tok = s.split()
        kind, nums = tok[0], _ints(tok[1:], no)
        i = len(nodes)
        if kind == "S" and len(nums) == 1 and nums[0] in (0, 1):
            nodes.append(Sink(nums[0]))
            continue
        if kind == "D" and len(nums) == 3:
            var, kids = nums[0], nums[1:]
            if var < 1:
                raise FormatError(f"bad variable {var}", no)
            node = Decision(var, *kids)
        elif kind == "N" and len(nums) == 1:
            kids, node, has_noop = nums, NoOp(nums[0]), True
        else:
            raise FormatError(f"malformed line {s!r}", no)
        for c in kids:
            if not 0 <= c < i:
                raise FormatError(f"reference to node {c} not defined before this line", no)
        nodes.append(node)
    if not nodes:
        raise FormatError("empty FBDD")
    tested = {n.var for n in nodes if isinstance(n, Decision)}
    uni = tested if universe is None else set(universe)
    flavor = Flavor.FBDD_NOOPS if has_noop else Flavor.FBDD
    return CircuitDag(tuple(nodes), len(nodes) - 1, frozenset(uni), flavor)


def write_fbdd(dag: CircuitDag) -> str:
    order = topological_order(dag, from_root=True)
    pos = {u: i for i, u in enumerate(order)}
    out = []
    for u in order:
        node = dag.nodes[u]
        if isinstance(node, Sink):
            out.append(f"S {node.value}")
        elif isinstance(node, Decision):
            out.append(f"D {node.var} {pos[node.lo]} {pos[node.hi]}")
        elif isinstance(node, NoOp):
            out.append(f"N {pos[node.child]}")
        else:
            raise ValueError("AND nodes cannot be written in FBDD format")
    return "\n".join(out) + "\n"


# --------------------------------------------------------------- DNF / CNF

def _parse_dimacs(text: str, kind: str):
    names: dict[int, str] = {}
    header = None
    groups: list[list[int]] = []
    pending: list[int] = []
    for no, raw_line in enumerate(text.splitlines(), 1):
        s = raw_line.strip()
        if not s:
            continue
        tok = s.split()
        if tok[0] == "c":
            if len(tok) >= 4 and tok[1] == "var":
                names[_ints([tok[2]], no)[0]] = tok[3]
            continue
        if tok[0] == "p":
            if len(tok) != 4 or tok[1] != kind:
                raise FormatError(f"expected 'p {kind} <vars> <count>'", no)
            header = _ints(tok[2:], no)
            continue
        if header is None:
            raise FormatError("data before problem line", no)
        for x in _ints(tok, no):
            if x == 0:
                groups.append(pending)
                pending = []
            elif abs(x) > header[0]:
                raise FormatError(f"variable {abs(x)} exceeds declared {header[0]}", no)
            else:
                pending.append(x)
    if header is None:
        raise FormatError(f"missing 'p {kind}' line")
    if pending:
        groups.append(pending)
    if len(groups) != header[1]:
        log.warning("header declares %d %ss, file has %d", header[1], kind, len(groups))
    return groups, range(1, header[0] + 1), names


def parse_dnf(text: str) -> DnfFormula:
    groups, uni, names = _parse_dimacs(text, "dnf")
    return dnf(groups, uni, names)


def parse_cnf(text: str) -> CnfFormula:
    groups, uni, names = _parse_dimacs(text, "cnf")
    return cnf(groups, uni, names)


def _write_dimacs(kind: str, groups, universe, names) -> str:
    n = max(universe, default=0)
    out = [f"c var {v} {names[v]}" for v in sorted(names)]
    out.append(f"p {kind} {n} {len(groups)}")
    out += [" ".join(str(x) for x in sorted(g, key=abs)) + (" 0" if g else "0")
            for g in groups]
    return "\n".join(out) + "\n"


def write_dnf(f: DnfFormula) -> str:
    return _write_dimacs("dnf", f.terms, f.universe, f.names)


def write_cnf(f: CnfFormula) -> str:
    return _write_dimacs("cnf", f.clauses, f.universe, f.names)


# ------------------------------------------------------------------ weights

def parse_weights(text: str, universe: Iterable[int]) -> dict[int, Fraction]:
    """``var,probability`` rows; variables with no row get 1/2 and a warning."""
    w: dict[int, Fraction] = {}
    for row in csv.reader(_io.StringIO(text)):
        if not row or row[0].strip().startswith("#"):
            continue
        if row[0].strip() == "var":
            continue
        if len(row) != 2:
            raise FormatError(f"expected 'var,probability', got {row}")
        try:
            v, p = int(row[0]), Fraction(row[1].strip())
        except ValueError:
            raise FormatError(f"bad weight row {row}") from None
        if not 0 <= p <= 1:
            raise FormatError(f"probability {p} of variable {v} outside [0,1]")
        w[v] = p
    missing = sorted(set(universe) - set(w))
    if missing:
        log.warning("no weight for variables %s; using 1/2", missing)
        for v in missing:
            w[v] = Fraction(1, 2)
    return w


# ------------------------------------------------------------------- report

def report_json(report: ConvertReport) -> str:
    return json.dumps(report.to_dict()) + "\n"


# ------------------------------------------------------------------- query

_ATOM = re.compile(r"\s*([A-Za-z_]\w*)\s*\(([^)]*)\)\s*")


def _parse_arg(tok: str, variables: set[str]):
    tok = tok.strip()
    if len(tok) >= 2 and tok[0] == tok[-1] and tok[0] in "'\"":
        return Const(tok[1:-1])
    if re.fullmatch(r"-?\d+", tok):
        return Const(tok)
    if tok in variables:
        return QVar(tok)
    raise FormatError(f"{tok!r} is neither a declared variable nor a quoted constant")


def _split_top(s: str, sep: str) -> list[str]:
    parts, depth, quote, cur = [], 0, None, []
    for ch in s:
        if quote:
            quote = None if ch == quote else quote
        elif ch in "'\"":
            quote = ch
        elif ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
            continue
        cur.append(ch)
    parts.append("".join(cur))
    return parts


def parse_query(text: str) -> UcqQuery:
    """``exists x y : R(x), S(x,y), T(y) | exists x : R(x)``; constants quoted."""
    body = " ".join(s for _, s in _content_lines(text, comment="#"))
    disjuncts = []
    for part in _split_top(body, "|"):
        part = part.strip()
        m = re.fullmatch(r"exists\s+([^:]*):(.*)", part, re.S)
        if m:
            variables, rest = tuple(m.group(1).split()), m.group(2)
        else:
            variables, rest = (), part
        atoms = []
        for chunk in _split_top(rest, ","):
            am = _ATOM.fullmatch(chunk)
            if not am:
                raise FormatError(f"cannot parse atom {chunk.strip()!r}")
            args = [a for a in _split_top(am.group(2), ",")] if am.group(2).strip() else []
            atoms.append(Atom(am.group(1), tuple(_parse_arg(a, set(variables)) for a in args)))
        if not atoms:
            raise FormatError(f"conjunctive query without atoms: {part!r}")
        try:
            disjuncts.append(CQ(variables, tuple(atoms)))
        except ValueError as e:
            raise FormatError(str(e)) from None
    return UcqQuery(tuple(disjuncts))


def format_query(q: UcqQuery) -> str:
    parts = []
    for cq in q.disjuncts:
        atoms = ", ".join(str(a) for a in cq.atoms)
        parts.append(f"exists {' '.join(cq.variables)} : {atoms}" if cq.variables else atoms)
    return " | ".join(parts) + "\n"


# ---------------------------------------------------------------- database

def parse_db(text: str) -> DatabaseInstance:
    """One tuple per line: ``Rel(c1, c2) [name] [probability]``.

    ``relation Rel <arity>`` declares a relation (needed when it has no tuples);
    ``domain c1 c2 ...`` overrides the default domain (all constants seen).
    """
    relations: dict[str, list] = {}
    arity: dict[str, int] = {}
    names, probs = {}, {}
    domain = None
    for no, s in _content_lines(text, comment="#"):
        tok = s.split()
        if tok[0] == "relation":
            if len(tok) != 3:
                raise FormatError("expected 'relation <name> <arity>'", no)
            arity[tok[1]] = _ints([tok[2]], no)[0]
            relations.setdefault(tok[1], [])
            continue
        if tok[0] == "domain":
            domain = tok[1:]
            continue
        m = re.match(r"\s*([A-Za-z_]\w*)\s*\(([^)]*)\)(.*)$", s)
        if not m:
            raise FormatError(f"cannot parse tuple {s!r}", no)
        rel = m.group(1)
        vals = tuple(v.strip().strip("'\"") for v in m.group(2).split(",")) if m.group(2).strip() else ()
        if rel in arity and arity[rel] != len(vals):
            raise FormatError(f"arity mismatch for {rel}", no)
        arity.setdefault(rel, len(vals))
        relations.setdefault(rel, []).append(vals)
        extra = shlex.split(m.group(3))
        key = (rel, vals)
        for e in extra:
            try:
                probs[key] = Fraction(e)
            except ValueError:
                names[key] = e
    return DatabaseInstance.build(relations, arity, names, probs, domain)


def write_db(db: DatabaseInstance) -> str:
    out = [f"relation {rel} {db.arity[rel]}" for rel in db.arity]
    for rel, rows in db.tuples.items():
        for r in rows:
            v = db.tuple_vars[(rel, r)]
            out.append(f"{rel}({', '.join(r)}) {db.names[v]} {db.probs[v]}")
    return "\n".join(out) + "\n"
