"""Probabilistic-database lineage: instances, UCQs, grounding, hierarchy test."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .formulas import DnfFormula, dnf

Constant = str
TupleKey = tuple[str, tuple[Constant, ...]]   # (relation, values)


def _natural(value: Constant):
    return (0, int(value), "") if re.fullmatch(r"-?\d+", value) else (1, 0, value)


def _tuple_order(t: tuple[Constant, ...]):
    return tuple(_natural(x) for x in t)


@dataclass
class DatabaseInstance:
    """Tuples of each relation, one Boolean variable per tuple.

    Variables are numbered relation by relation (declaration order), tuples
    lexicographically within a relation (integers compare numerically).
    """

    arity: dict[str, int]
    tuples: dict[str, list[tuple[Constant, ...]]]
    tuple_vars: dict[TupleKey, int]
    names: dict[int, str]
    probs: dict[int, Fraction]
    domain: tuple[Constant, ...]

    @classmethod
    def build(cls, relations: Mapping[str, Iterable[Sequence]], arity: Mapping[str, int] | None = None,
              names: Mapping[TupleKey, str] | None = None,
              probs: Mapping[TupleKey, "Fraction | float"] | None = None,
              domain: Iterable | None = None) -> "DatabaseInstance":
        arity = dict(arity or {})
        names = names or {}
        probs = probs or {}
        tuples: dict[str, list] = {}
        for rel, rows in relations.items():
            rows = sorted({tuple(str(x) for x in r) for r in rows}, key=_tuple_order)
            for r in rows:
                if arity.setdefault(rel, len(r)) != len(r):
                    raise ValueError(f"tuple {r} does not match arity {arity[rel]} of {rel}")
            tuples[rel] = rows
        for rel in arity:
            tuples.setdefault(rel, [])
        tuple_vars: dict[TupleKey, int] = {}
        var_names: dict[int, str] = {}
        var_probs: dict[int, Fraction] = {}
        for rel in tuples:
            for r in tuples[rel]:
                v = len(tuple_vars) + 1
                tuple_vars[(rel, r)] = v
                var_names[v] = names.get((rel, r), f"{rel}{v}")
                p = probs.get((rel, r), Fraction(1, 2))
                var_probs[v] = p if isinstance(p, float) else Fraction(p)
        if domain is None:
            seen = {x for rows in tuples.values() for r in rows for x in r}
            domain = sorted(seen, key=_natural)
        return cls(arity, tuples, tuple_vars, var_names, var_probs, tuple(str(x) for x in domain))

    def var_of(self, relation: str, values: Sequence) -> int | None:
        return self.tuple_vars.get((relation, tuple(str(x) for x in values)))


# ----------------------------------------------------------------- queries

@dataclass(frozen=True)
class QVar:
    name: str


@dataclass(frozen=True)
class Const:
    value: Constant


@dataclass(frozen=True)
class Atom:
    relation: str
    args: tuple[QVar | Const, ...]

    def __str__(self):
        shown = [a.name if isinstance(a, QVar) else repr(a.value) for a in self.args]
        return f"{self.relation}({', '.join(shown)})"


@dataclass(frozen=True)
class CQ:
    variables: tuple[str, ...]
    atoms: tuple[Atom, ...]

    def __post_init__(self):
        used = {a.name for atom in self.atoms for a in atom.args if isinstance(a, QVar)}
        missing = [v for v in self.variables if v not in used]
        if missing:
            raise ValueError(f"variables {missing} occur in no atom")
        undeclared = used - set(self.variables)
        if undeclared:
            raise ValueError(f"undeclared variables {sorted(undeclared)}")

    def at(self, x: str) -> frozenset[int]:
        """Indices of the atoms mentioning variable ``x``."""
        return frozenset(i for i, atom in enumerate(self.atoms)
                         if any(isinstance(a, QVar) and a.name == x for a in atom.args))


@dataclass(frozen=True)
class UcqQuery:
    disjuncts: tuple[CQ, ...]


@dataclass
class Lineage:
    formula: DnfFormula
    provenance: dict[frozenset[int], tuple[TupleKey, ...]] = field(default_factory=dict)


def _ground_cq(cq: CQ, db: DatabaseInstance):
    for atom in cq.atoms:
        if atom.relation not in db.arity:
            raise KeyError(f"unknown relation {atom.relation}")
        if db.arity[atom.relation] != len(atom.args):
            raise ValueError(f"{atom} does not match arity {db.arity[atom.relation]}")

    def extend(i: int, binding: dict[str, Constant], used: list[TupleKey]):
        if i == len(cq.atoms):
            yield list(used)
            return
        atom = cq.atoms[i]
        for row in db.tuples[atom.relation]:
            new = dict(binding)
            for arg, val in zip(atom.args, row):
                if isinstance(arg, Const):
                    if arg.value != val:
                        break
                elif new.setdefault(arg.name, val) != val:
                    break
            else:
                used.append((atom.relation, row))
                yield from extend(i + 1, new, used)
                used.pop()

    yield from extend(0, {}, [])


def ground(q: UcqQuery, db: DatabaseInstance) -> Lineage:
    """Lineage DNF of ``q`` on ``db``; tuples absent from ``db`` make their term false.

    The universe is the set of variables occurring in the lineage.
    """
    terms: list[frozenset[int]] = []
    provenance: dict[frozenset[int], tuple[TupleKey, ...]] = {}
    for cq in q.disjuncts:
        for used in _ground_cq(cq, db):
            term = frozenset(db.tuple_vars[t] for t in used)
            if term not in provenance:
                provenance[term] = tuple(dict.fromkeys(used))
                terms.append(term)
    names = {v: db.names[v] for t in terms for v in t}
    return Lineage(dnf(terms, None, names), provenance)


@dataclass(frozen=True)
class HierarchyResult:
    hierarchical: bool
    witness: tuple[int, str, str] | None = None    # (disjunct index, x, y)

    def __str__(self):
        if self.hierarchical:
            return "hierarchical"
        _, x, y = self.witness
        return f"non-hierarchical: ({x},{y})"


def hierarchical(q: UcqQuery) -> HierarchyResult:
    """Every pair of variables must have nested or disjoint atom sets, in every disjunct."""
    for k, cq in enumerate(q.disjuncts):
        at = {x: cq.at(x) for x in cq.variables}
        for i, x in enumerate(cq.variables):
            for y in cq.variables[i + 1:]:
                a, b = at[x], at[y]
                if not (a <= b or b <= a or not (a & b)):
                    return HierarchyResult(False, (k, x, y))
    return HierarchyResult(True)


# ------------------------------------------------------------ instances

def query_h() -> UcqQuery:
    """exists x y : R(x), S(x,y), T(y)"""
    x, y = QVar("x"), QVar("y")
    return UcqQuery((CQ(("x", "y"), (Atom("R", (x,)), Atom("S", (x, y)), Atom("T", (y,)))),))


def query_triangle() -> UcqQuery:
    x, y, z = QVar("x"), QVar("y"), QVar("z")
    return UcqQuery((CQ(("x", "y", "z"),
                        (Atom("F", (x, y)), Atom("F", (y, z)), Atom("F", (z, x)))),))


def gen_join_db(n: int, prob: "Fraction | float" = Fraction(1, 2)) -> DatabaseInstance:
    """R = [n], S = [n] x [n], T = [n]; variables X_i, Z_ij, Y_j in that order."""
    if n < 1:
        raise ValueError("n must be positive")
    rng = range(1, n + 1)
    z = (lambda i, j: f"Z{i}{j}") if n < 10 else (lambda i, j: f"Z{i}_{j}")
    rel = {"R": [(i,) for i in rng], "S": [(i, j) for i in rng for j in rng], "T": [(j,) for j in rng]}
    names = {("R", (str(i),)): f"X{i}" for i in rng}
    names.update({("S", (str(i), str(j))): z(i, j) for i in rng for j in rng})
    names.update({("T", (str(j),)): f"Y{j}" for j in rng})
    probs = {key: prob for key in names}
    return DatabaseInstance.build(rel, names=names, probs=probs, domain=[str(i) for i in rng])


def gen_friends_db(n: int, prob: "Fraction | float" = Fraction(1, 2)) -> DatabaseInstance:
    """Complete friend relation F = [n] x [n] with F(i,j) named Z_ij."""
    rng = range(1, n + 1)
    z = (lambda i, j: f"Z{i}{j}") if n < 10 else (lambda i, j: f"Z{i}_{j}")
    names = {("F", (str(i), str(j))): z(i, j) for i in rng for j in rng}
    return DatabaseInstance.build({"F": [(i, j) for i in rng for j in rng]}, names=names,
                                  probs={k: prob for k in names})


def query_prob(q: UcqQuery, db: DatabaseInstance, rel_tol: float = 1e-9):
    """P(lineage) through compile -> convert -> FBDD probability, checked against the DNNF value."""
    from .compiler import compile_formula
    from .convert import convert
    from .counting import prob_dnnf, prob_fbdd

    lin = ground(q, db).formula
    weights = {v: db.probs[v] for v in lin.universe}
    compiled = compile_formula(lin)
    fbdd = convert(compiled).fbdd
    p = prob_fbdd(fbdd, weights)
    check = prob_dnnf(compiled, weights)
    if isinstance(p, float) or isinstance(check, float):
        if abs(p - check) > rel_tol * max(abs(p), abs(check), 1e-300):
            raise RuntimeError(f"FBDD probability {p} disagrees with decision-DNNF {check}")
    elif p != check:
        raise RuntimeError(f"FBDD probability {p} disagrees with decision-DNNF {check}")
    return p
