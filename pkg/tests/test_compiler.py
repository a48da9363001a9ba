import pytest

from fbddkit import And, Decision, Sink, compile_formula, dnf, max_ands_on_path, validate
from fbddkit.compiler import Heuristic, _dnf_factors, is_monotone_kdnf
from fbddkit.formulas import cnf
from fbddkit.generators import gen_phi, gen_psi, gen_psi_dual, gen_random_cnf, gen_random_dnf
from fbddkit.oracle import equivalent


def test_constants():
    e = compile_formula(dnf([], [1, 2]))
    assert e.nodes[e.root] == Sink(0)
    t = compile_formula(dnf([()], [1, 2]))
    assert t.nodes[t.root] == Sink(1)
    assert compile_formula(cnf([], [1])).nodes[compile_formula(cnf([], [1])).root] == Sink(1)


def test_single_term_splits_into_and():
    dag = compile_formula(dnf([(1, 2)]))
    top = dag.nodes[dag.root]
    assert isinstance(top, And)
    left, right = (dag.nodes[c] for c in top.children)
    assert isinstance(left, Decision) and isinstance(right, Decision)
    assert (left.var, right.var) == (1, 2)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
@pytest.mark.parametrize("h", list(Heuristic))
def test_phi(n, h):
    f = gen_phi(n)
    dag = compile_formula(f, h)
    assert validate(dag).ok
    assert max_ands_on_path(dag) <= 2
    if n <= 3:
        assert equivalent(f, dag)


def test_monotone_kdnf_report():
    assert is_monotone_kdnf(gen_phi(3)) == (True, 3)
    assert is_monotone_kdnf(gen_psi(2)) == (True, 2)
    assert is_monotone_kdnf(dnf([(1,), (1, 2)])) == (True, 1)
    assert is_monotone_kdnf(dnf([(1, -2)]))[0] is False


def test_cnf_components():
    f = cnf([(1, 2), (3, -4)], range(1, 5))
    dag = compile_formula(f)
    assert isinstance(dag.nodes[dag.root], And)
    assert equivalent(f, dag)


def test_dnf_disjoint_terms_are_not_conjoined():
    # X1 or X2 has variable-disjoint terms but is not a conjunction
    f = dnf([(1,), (2,)])
    dag = compile_formula(f)
    assert not isinstance(dag.nodes[dag.root], And)
    assert equivalent(f, dag)


def test_dnf_product_factorization():
    # (X1 or X2)(X3 or X4) written out as four terms
    terms = frozenset(frozenset(t) for t in [(1, 3), (1, 4), (2, 3), (2, 4)])
    parts = _dnf_factors(terms)
    assert sorted(sorted(sorted(t) for t in p) for p in parts) == [[[1], [2]], [[3], [4]]]
    # X1 X2 or X1 X3 = X1 (X2 or X3)
    parts = _dnf_factors(frozenset({frozenset({1, 2}), frozenset({1, 3})}))
    assert sorted(sorted(sorted(t) for t in p) for p in parts) == [[[1]], [[2], [3]]]
    # X1 X2 or X3 X4 does not factor
    assert len(_dnf_factors(frozenset({frozenset({1, 2}), frozenset({3, 4})}))) == 1


def test_dual_and_random_inputs():
    for f in [gen_psi_dual(2)] + [gen_random_dnf(8, 6, 3, s) for s in range(5)] + \
             [gen_random_cnf(8, 8, 3, s) for s in range(5)]:
        for h in Heuristic:
            dag = compile_formula(f, h)
            assert validate(dag).ok
            assert equivalent(f, dag)


def test_cache_does_not_change_function():
    f = gen_psi(2)
    with_cache = compile_formula(f, use_cache=True)
    without = compile_formula(f, use_cache=False)
    assert len(with_cache.nodes) < len(without.nodes)
    assert equivalent(with_cache, without)
    assert max_ands_on_path(without) <= 1


def test_deterministic_output():
    assert compile_formula(gen_phi(3)) == compile_formula(gen_phi(3))
