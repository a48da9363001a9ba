"""The decision-DNNF corpus shared by the acceptance suite and the scripts."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .compiler import Heuristic, compile_formula
from .dag import CircuitDag
from .formulas import CnfFormula, DnfFormula
from .generators import (gen_phi, gen_psi, gen_psi_dual, gen_random_cnf, gen_random_dnf,
                         gen_random_monotone_dnf, gen_tight_example, gen_triangle)


@dataclass(frozen=True)
class CorpusItem:
    name: str
    dag: CircuitDag
    formula: DnfFormula | CnfFormula | None = None
    structural: bool = False      # too many variables for exhaustive comparison


@dataclass(frozen=True)
class CorpusConfig:
    n_random_monotone: int = 60
    n_random_dnf: int = 30
    n_random_cnf: int = 30
    max_phi: int = 4
    max_tight: int = 3
    heuristics: tuple[Heuristic, ...] = (Heuristic.MOST_FREQUENT, Heuristic.FIXED_ORDER)
    seed: int = 2013
    brute_cap: int = 24


def _formulas(cfg: CorpusConfig):
    yield "psi2", gen_psi(2)
    yield "psi2-dual", gen_psi_dual(2)
    for n in range(1, cfg.max_phi + 1):
        yield f"phi{n}", gen_phi(n)
    for n in (1, 2, 3):
        yield f"triangle{n}", gen_triangle(n)
    for i in range(cfg.n_random_monotone):
        n_vars = 6 + i % 9
        k = 1 + i % 4
        n_terms = min(2 + i % 11, math.comb(n_vars, k))
        yield f"mono{i}", gen_random_monotone_dnf(n_vars, n_terms, k, cfg.seed + i)
    for i in range(cfg.n_random_dnf):
        yield f"dnf{i}", gen_random_dnf(5 + i % 8, 2 + i % 9, 4, cfg.seed + 1000 + i)
    for i in range(cfg.n_random_cnf):
        yield f"cnf{i}", gen_random_cnf(5 + i % 8, 3 + i % 12, 3, cfg.seed + 2000 + i)


def build_corpus(cfg: CorpusConfig | None = None) -> list[CorpusItem]:
    cfg = cfg or CorpusConfig()
    items = []
    for name, f in _formulas(cfg):
        for h in cfg.heuristics:
            dag = compile_formula(f, h)
            items.append(CorpusItem(f"{name}/{h.value}", dag, f, len(dag.universe) > cfg.brute_cap))
    for p in range(1, cfg.max_tight + 1):
        dag = gen_tight_example(p)
        items.append(CorpusItem(f"tight{p}", dag, None, len(dag.universe) > 20))
    return items
