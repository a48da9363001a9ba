import pytest

from fbddkit import count_dnnf, normalize, validate
from fbddkit.compiler import is_monotone_kdnf
from fbddkit.convert import classify_and_order
from fbddkit.dag import And
from fbddkit.generators import (gamma_eval, gamma_function, gen_En, gen_phi, gen_psi, gen_psi_dual,
                                gen_random_monotone_dnf, gen_tight_example, gen_triangle, is_prime,
                                tight_binomial_as_printed, tight_layout, tight_path_count)
from fbddkit.oracle import brute_count


def test_edge_relation_sizes():
    e4 = gen_En(2)
    assert (1, 1) in e4.pairs
    assert len(e4.pairs) == 8
    assert len(gen_En(3).pairs) == 27


def test_edge_relation_rule():
    p = 3
    for i, j in gen_En(p).pairs:
        a, b = (i - 1) % p, (i - 1) // p
        c, d = (j - 1) % p, (j - 1) // p
        assert (c - a - b * d) % p == 0


def test_edge_relation_needs_prime():
    assert not is_prime(4) and is_prime(5)
    with pytest.raises(ValueError):
        gen_En(4)


def test_psi():
    f = gen_psi(2)
    assert len(f.terms) == 8 and f.universe == frozenset(range(1, 9))
    assert f.monotone and f.k == 2
    assert is_monotone_kdnf(f) == (True, 2)
    assert brute_count(f) == 209
    assert len(gen_psi_dual(2).clauses) == 8
    assert brute_count(gen_psi_dual(2)) == 47


def test_phi():
    f1 = gen_phi(1)
    assert [sorted(t) for t in f1.terms] == [[1, 2, 3]] and f1.render() == "X1Z11Y1"
    f2 = gen_phi(2)
    assert len(f2.terms) == 4 and len(f2.universe) == 8 and f2.k == 3
    assert is_monotone_kdnf(f2) == (True, 3)
    assert brute_count(f2) == 95


def test_triangle():
    assert [sorted(t) for t in gen_triangle(1).terms] == [[1]]
    d2 = gen_triangle(2)
    z = {"Z11": 1, "Z12": 2, "Z21": 3, "Z22": 4}
    terms = {frozenset(t) for t in d2.terms}
    assert terms == {frozenset({z["Z11"]}), frozenset({z["Z22"]}),
                     frozenset({z["Z11"], z["Z12"], z["Z21"]}), frozenset({z["Z12"], z["Z21"], z["Z22"]})}
    assert frozenset({z["Z12"], z["Z21"]}) not in terms
    assert brute_count(d2) == 12


def test_gamma():
    assert gamma_eval(2, [[1, 1], [1, 1]]) == 1
    assert gamma_eval(2, [[0, 0], [0, 0]]) == 0
    assert gamma_eval(2, [[1, 1], [1, 0]]) == 1
    f, uni = gamma_function(2)
    assert f({1: 1, 2: 1, 3: 1, 4: 0}) == 1
    with pytest.raises(ValueError):
        gamma_eval(2, [[1]])


@pytest.mark.parametrize("p, m, blocks, ands", [(1, 1, 1, 2), (2, 3, 3, 12), (3, 7, 7, 56)])
def test_tight_shape(p, m, blocks, ands):
    lay = tight_layout(p)
    assert lay.m == m and len(lay.blocks) == blocks
    dag = gen_tight_example(p)
    assert validate(dag).ok
    assert sum(isinstance(n, And) for n in dag.nodes) == ands == m * (m + 1)
    assert classify_and_order(normalize(dag)).counts.total == ands


def test_tight_and_wiring():
    dag = gen_tight_example(2)
    lay = tight_layout(2)
    by_var = {n.var: i for i, n in enumerate(dag.nodes) if hasattr(n, "var")}
    root_block = [dag.nodes[by_var[lay.x_var("", i)]] for i in range(1, lay.m + 1)]
    for i, x in enumerate(root_block, start=1):
        a = dag.nodes[x.hi]
        assert isinstance(a, And)
        left, right = (dag.nodes[c] for c in a.children)
        assert (left.var, right.var) == (lay.x_var("0", i), lay.x_var("1", i))


def test_tight_counts_and_closed_forms():
    assert [tight_path_count(p) for p in (2, 3, 4)] == [3, 28, 680]
    assert [tight_binomial_as_printed(p) for p in (2, 3, 4)] == [6, 84, 3060]
    assert count_dnnf(gen_tight_example(1)) == brute_count(gen_tight_example(1))


def test_random_monotone():
    full = gen_random_monotone_dnf(4, 1, 4, seed=1)
    assert [sorted(t) for t in full.terms] == [[1, 2, 3, 4]]
    a = gen_random_monotone_dnf(10, 12, 3, seed=7)
    assert a == gen_random_monotone_dnf(10, 12, 3, seed=7)
    ok, k = is_monotone_kdnf(a)
    assert ok and k <= 3
    assert all(len(t) == 3 for t in a.terms) and len(set(a.terms)) == 12
    with pytest.raises(ValueError):
        gen_random_monotone_dnf(3, 5, 2, seed=0)
    with pytest.raises(ValueError):
        gen_random_monotone_dnf(3, 1, 4, seed=0)
