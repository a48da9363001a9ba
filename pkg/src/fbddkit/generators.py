"""Formula families and the quasipolynomial-blowup decision-DNNF."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Sequence

from .dag import CircuitDag, DagBuilder, Flavor
from .formulas import CnfFormula, DnfFormula, cnf, dnf


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def _require_prime(p: int) -> None:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")


@dataclass(frozen=True)
class EdgeRelation:
    p: int
    pairs: frozenset[tuple[int, int]]

    @property
    def n(self) -> int:
        return self.p * self.p


def gen_En(p: int) -> EdgeRelation:
    """Pairs (i+1, j+1) with i = a+bp, j = c+dp and c = a+bd mod p."""
    _require_prime(p)
    n = p * p
    pairs = set()
    for i in range(n):
        a, b = i % p, i // p
        for j in range(n):
            c, d = j % p, j // p
            if (c - (a + b * d)) % p == 0:
                pairs.add((i + 1, j + 1))
    return EdgeRelation(p, frozenset(pairs))


def _psi_vars(n: int) -> tuple[dict[int, str], int]:
    names = {i: f"X{i}" for i in range(1, n + 1)}
    names.update({n + j: f"Y{j}" for j in range(1, n + 1)})
    return names, 2 * n


def gen_psi(p: int) -> DnfFormula:
    """OR of X_i Y_j over E_n; X_i is variable i, Y_j is variable n+j."""
    rel = gen_En(p)
    n = rel.n
    names, nvars = _psi_vars(n)
    terms = [(i, n + j) for i, j in sorted(rel.pairs)]
    return dnf(terms, range(1, nvars + 1), names)


def gen_psi_dual(p: int) -> CnfFormula:
    rel = gen_En(p)
    n = rel.n
    names, nvars = _psi_vars(n)
    clauses = [(i, n + j) for i, j in sorted(rel.pairs)]
    return cnf(clauses, range(1, nvars + 1), names)


def phi_var(n: int, kind: str, i: int, j: int = 0) -> int:
    """Variable numbering of Phi_n: X_1..X_n, then Z_11..Z_nn row-major, then Y_1..Y_n."""
    if kind == "X":
        return i
    if kind == "Z":
        return n + (i - 1) * n + j
    if kind == "Y":
        return n + n * n + i
    raise ValueError(kind)


def gen_phi(n: int) -> DnfFormula:
    if n < 1:
        raise ValueError("n must be positive")
    names = {}
    for i in range(1, n + 1):
        names[phi_var(n, "X", i)] = f"X{i}"
        names[phi_var(n, "Y", i)] = f"Y{i}"
        for j in range(1, n + 1):
            names[phi_var(n, "Z", i, j)] = f"Z{i}{j}" if n < 10 else f"Z{i}_{j}"
    terms = [(phi_var(n, "X", i), phi_var(n, "Z", i, j), phi_var(n, "Y", j))
             for i in range(1, n + 1) for j in range(1, n + 1)]
    return dnf(terms, range(1, n * n + 2 * n + 1), names)


def gen_triangle(n: int) -> DnfFormula:
    """OR over all ordered triples of Z_ij Z_jk Z_ki; Z_ij is variable (i-1)n + j."""
    if n < 1:
        raise ValueError("n must be positive")

    def z(i, j):
        return (i - 1) * n + j

    names = {z(i, j): (f"Z{i}{j}" if n < 10 else f"Z{i}_{j}")
             for i in range(1, n + 1) for j in range(1, n + 1)}
    rng = range(1, n + 1)
    terms = [(z(i, j), z(j, k), z(k, i)) for i in rng for j in rng for k in rng]
    return dnf(terms, range(1, n * n + 1), names)


def gamma_eval(n: int, matrix: Sequence[Sequence[int]]) -> int:
    """Even parity with an all-1 row, or odd parity with an all-1 column."""
    if len(matrix) != n or any(len(row) != n for row in matrix):
        raise ValueError(f"expected a {n}x{n} matrix")
    parity = sum(sum(row) for row in matrix) % 2
    if parity == 0:
        return int(any(all(row) for row in matrix))
    return int(any(all(matrix[i][j] for i in range(n)) for j in range(n)))


def gamma_function(n: int):
    """``gamma_eval`` as an oracle over variables X_ij = (i-1)n + j; returns (function, universe)."""
    def f(a):
        return gamma_eval(n, [[a[i * n + j + 1] for j in range(n)] for i in range(n)])
    return f, frozenset(range(1, n * n + 1))


# ------------------------------------------------------------ tight example

@dataclass(frozen=True)
class TightLayout:
    p: int
    m: int
    blocks: tuple[str, ...]        # block labels w, breadth-first

    def x_var(self, w: str, i: int) -> int:
        return self.blocks.index(w) * self.m + i

    def leaf_var(self, w: str, i: int) -> int:
        """Variable of the leaf decision under label w (|w| = p), 1 <= i <= m+1."""
        return self.m * self.m + int(w, 2) * (self.m + 1) + i

    @property
    def target_var(self) -> int:
        """Last variable of the left-most block on the lowest level."""
        return self.x_var("0" * (self.p - 1), self.m)


def tight_layout(p: int) -> TightLayout:
    if p < 1:
        raise ValueError("p must be positive")
    m = 2 ** p - 1
    blocks = [""]
    for w in blocks:
        if len(w) < p - 1:
            blocks.extend((w + "0", w + "1"))
    return TightLayout(p, m, tuple(blocks))


def gen_tight_example(p: int) -> CircuitDag:
    """Block-tree decision-DNNF on which the conversion copies one node superpolynomially often.

    Block w holds a chain of decision nodes X[w,1..m]; X[w,i] goes to X[w,i+1] on 0
    and to the i-th AND node of the block on 1.  X[w,m] goes to AND node m on 1 and
    AND node m+1 on 0.  The i-th AND node has children X[w0,i] (first) and X[w1,i];
    AND node m+1 has children AND[w0,m+1] and AND[w1,m+1].  Below the lowest level
    those targets are single decisions Y[w',i] into a shared 0-sink and a private 1-sink.
    """
    lay = tight_layout(p)
    m = lay.m
    b = DagBuilder()
    names: dict[int, str] = {}
    zero = b.sink(0)
    entry: dict[tuple[str, int], int] = {}      # (w, i) -> X[w,i] node
    and_node: dict[tuple[str, int], int] = {}   # (w, i) -> i-th AND node

    for w in reversed(lay.blocks):
        for i in range(1, m + 2):
            kids = []
            for bit in "01":
                c = w + bit
                if len(c) == p:
                    v = lay.leaf_var(c, i)
                    names[v] = f"Y[{c},{i}]"
                    kids.append(b.decision(v, zero, b.sink(1)))
                else:
                    kids.append(entry[(c, i)] if i <= m else and_node[(c, m + 1)])
            and_node[(w, i)] = b.and_(*kids)
        nxt = and_node[(w, m + 1)]
        for i in range(m, 0, -1):
            v = lay.x_var(w, i)
            names[v] = f"X[{w or 'e'},{i}]"
            nxt = entry[(w, i)] = b.decision(v, nxt, and_node[(w, i)])
    root = entry[("", 1)]
    universe = range(1, m * m + 2 ** p * (m + 1) + 1)
    return b.build(root, Flavor.DECISION_DNNF, universe, names)


def tight_path_count(p: int) -> int:
    """Stars-and-bars count of root paths to the target: C(m+p-2, p-1)."""
    m = 2 ** p - 1
    return math.comb(m + p - 2, p - 1)


def tight_binomial_as_printed(p: int) -> int:
    m = 2 ** p - 1
    return math.comb(m - 1 + p, p)


# ------------------------------------------------------------ random DNFs

def gen_random_monotone_dnf(n_vars: int, n_terms: int, k: int, seed: int) -> DnfFormula:
    """``n_terms`` distinct terms of exactly ``k`` positive literals, deterministic in ``seed``."""
    if not 1 <= k <= n_vars or n_terms < 0:
        raise ValueError("need 1 <= k <= n_vars and n_terms >= 0")
    if n_terms > math.comb(n_vars, k):
        raise ValueError(f"only {math.comb(n_vars, k)} distinct terms of width {k} exist")
    rng = random.Random(seed)
    seen: set[frozenset[int]] = set()
    terms = []
    while len(terms) < n_terms:
        t = frozenset(rng.sample(range(1, n_vars + 1), k))
        if t not in seen:
            seen.add(t)
            terms.append(t)
    return dnf(terms, range(1, n_vars + 1))


def gen_random_dnf(n_vars: int, n_terms: int, max_width: int, seed: int) -> DnfFormula:
    """Terms of random width with random polarity; may be non-monotone."""
    rng = random.Random(seed)
    terms = []
    for _ in range(n_terms):
        vs = rng.sample(range(1, n_vars + 1), rng.randint(1, max_width))
        terms.append([v if rng.random() < 0.5 else -v for v in vs])
    return dnf(terms, range(1, n_vars + 1))


def gen_random_cnf(n_vars: int, n_clauses: int, max_width: int, seed: int) -> CnfFormula:
    rng = random.Random(seed)
    clauses = []
    for _ in range(n_clauses):
        vs = rng.sample(range(1, n_vars + 1), rng.randint(1, max_width))
        clauses.append([v if rng.random() < 0.5 else -v for v in vs])
    return cnf(clauses, range(1, n_vars + 1))
