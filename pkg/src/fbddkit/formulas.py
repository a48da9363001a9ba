"""Flat DNF / CNF formulas over integer variables.

Literals are signed integers in the DIMACS convention: ``3`` is variable 3,
``-3`` its negation.  Terms and clauses are frozensets of literals.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping


def _clean(groups: Iterable[Iterable[int]]) -> tuple[frozenset[int], ...]:
    seen: set[frozenset[int]] = set()
    out = []
    for group in groups:
        lits = frozenset(int(x) for x in group)
        if 0 in lits:
            raise ValueError("literal 0 is not a variable")
        if any(-x in lits for x in lits):
            continue  # contradictory term / tautological clause
        if lits not in seen:
            seen.add(lits)
            out.append(lits)
    return tuple(out)


def _support(groups: Iterable[frozenset[int]]) -> frozenset[int]:
    return frozenset(abs(x) for g in groups for x in g)


@dataclass(frozen=True)
class DnfFormula:
    """Disjunction of terms.  No terms means false; an empty term means true."""

    terms: tuple[frozenset[int], ...]
    universe: frozenset[int]
    names: Mapping[int, str] = field(default_factory=dict, compare=False, repr=False)

    @property
    def monotone(self) -> bool:
        return all(x > 0 for t in self.terms for x in t)

    @property
    def k(self) -> int:
        return max((len(t) for t in self.terms), default=0)

    def name(self, var: int) -> str:
        return self.names.get(var, f"x{var}")

    def render(self) -> str:
        """Human-readable form, e.g. ``X1Z11Y1 ∨ X2Z22Y2``."""
        if not self.terms:
            return "⊥"
        parts = []
        for t in self.terms:
            lits = sorted(t, key=abs)
            parts.append("".join(("¬" if x < 0 else "") + self.name(abs(x)) for x in lits) or "⊤")
        return " ∨ ".join(parts)


@dataclass(frozen=True)
class CnfFormula:
    """Conjunction of clauses.  No clauses means true; an empty clause means false."""

    clauses: tuple[frozenset[int], ...]
    universe: frozenset[int]
    names: Mapping[int, str] = field(default_factory=dict, compare=False, repr=False)

    @property
    def monotone(self) -> bool:
        return all(x > 0 for c in self.clauses for x in c)

    def name(self, var: int) -> str:
        return self.names.get(var, f"x{var}")


def dnf(terms: Iterable[Iterable[int]], universe: Iterable[int] | None = None,
        names: Mapping[int, str] | None = None) -> DnfFormula:
    """Build a DNF, dropping contradictory and duplicate terms (first occurrence wins)."""
    cleaned = _clean(terms)
    uni = _support(cleaned) if universe is None else frozenset(universe)
    missing = _support(cleaned) - uni
    if missing:
        raise ValueError(f"variables {sorted(missing)} not in universe")
    return DnfFormula(cleaned, uni, dict(names or {}))


def cnf(clauses: Iterable[Iterable[int]], universe: Iterable[int] | None = None,
        names: Mapping[int, str] | None = None) -> CnfFormula:
    cleaned = _clean(clauses)
    uni = _support(cleaned) if universe is None else frozenset(universe)
    missing = _support(cleaned) - uni
    if missing:
        raise ValueError(f"variables {sorted(missing)} not in universe")
    return CnfFormula(cleaned, uni, dict(names or {}))


def remove_subsumed(groups: Iterable[frozenset[int]]) -> list[frozenset[int]]:
    """Drop every group that strictly contains another group (order kept)."""
    groups = list(dict.fromkeys(groups))
    by_size = sorted(groups, key=len)
    keep = set()
    kept: list[frozenset[int]] = []
    for g in by_size:
        if not any(h <= g for h in kept):
            kept.append(g)
            keep.add(g)
    return [g for g in groups if g in keep]
