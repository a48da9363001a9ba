"""Property tests over random decision-DNNFs built directly (not through the compiler)."""

import random
from fractions import Fraction

from hypothesis import given, settings, strategies as st

from fbddkit import (And, DagBuilder, Flavor, compile_formula, convert, count_dnnf, count_fbdd, eliminate_noops,
                     equivalent, isomorphic, normalize, prob_dnnf, prob_fbdd, validate)
from fbddkit.counting import uniform
from fbddkit.dag import vars_below
from fbddkit.generators import gen_random_monotone_dnf
from fbddkit.oracle import brute_count, eval_dag, naive_count


def random_dnnf(rng: random.Random, n_vars: int = 7, share: float = 0.4):
    """Decision-DNNF over 1..n_vars; earlier nodes are reused when their variables fit.

    Only nodes that test some variable are shared, so AND children never overlap.
    """
    b = DagBuilder()
    pool: list[tuple[int, frozenset[int]]] = []

    def build(avail: frozenset[int], depth: int) -> tuple[int, frozenset[int]]:
        fits = [p for p in pool if p[1] <= avail]
        if fits and rng.random() < share:
            return rng.choice(fits)
        r = rng.random()
        if not avail or depth > 5 or r < 0.15:
            return b.sink(rng.random() < 0.6), frozenset()
        if r < 0.35 and len(avail) >= 2:
            xs = sorted(avail)
            rng.shuffle(xs)
            cut = rng.randint(1, len(xs) - 1)
            left, lv = build(frozenset(xs[:cut]), depth + 1)
            right, rv = build(frozenset(xs[cut:]), depth + 1)
            node = (b.and_(left, right), lv | rv)
        else:
            x = rng.choice(sorted(avail))
            lo, lov = build(avail - {x}, depth + 1)
            hi, hiv = build(avail - {x}, depth + 1)
            node = (b.decision(x, lo, hi), lov | hiv | {x})
        if node[1]:
            pool.append(node)
        return node

    root, _ = build(frozenset(range(1, n_vars + 1)), 0)
    return b.build(root, Flavor.DECISION_DNNF, range(1, n_vars + 1))


dnnfs = st.builds(lambda seed, n: random_dnnf(random.Random(seed), n),
                  st.integers(0, 2 ** 32), st.integers(1, 9))


@given(dnnfs)
def test_generator_produces_valid_dnnfs(d):
    assert validate(d).ok


@given(dnnfs)
def test_normalize_idempotent_and_equivalent(d):
    n = normalize(d)
    assert isomorphic(normalize(n), n)
    assert equivalent(d, n)
    assert all(len(x.children) == 2 for x in n.nodes if isinstance(x, And))


@given(dnnfs)
def test_normalize_growth_is_at_most_quadratic(d):
    assert len(normalize(d).nodes) <= max(2, len(d.nodes)) ** 2


@given(dnnfs)
def test_conversion_properties(d):
    conv = convert(d)
    r = conv.report
    assert validate(conv.fbdd).ok and validate(conv.with_noops).ok
    assert equivalent(d, conv.fbdd)
    assert equivalent(conv.with_noops, conv.fbdd)
    assert 2 ** r.L <= r.M + 1
    assert r.out_nodes_final <= r.out_nodes_with_noops
    assert convert(d).fbdd == conv.fbdd


@given(dnnfs)
def test_light_child_is_lighter(d):
    cl = convert(d).source
    below = cl.counts.below
    for z, node in enumerate(cl.dag.nodes):
        if isinstance(node, And):
            assert below[node.children[0]] <= below[node.children[1]]
            assert below[z] >= 2 * below[node.children[0]] + 1


@given(dnnfs)
def test_eliminate_noops_preserves_function(d):
    with_noops = convert(d).with_noops
    assert equivalent(with_noops, eliminate_noops(with_noops))


@given(dnnfs)
def test_counts_agree_with_enumeration(d):
    c = brute_count(d)
    assert count_dnnf(d) == c == count_fbdd(convert(d).fbdd)
    assert prob_dnnf(d, uniform(d.universe)) * 2 ** len(d.universe) == c


@settings(max_examples=20)
@given(dnnfs)
def test_bit_sliced_oracle_matches_naive(d):
    assert brute_count(d) == naive_count(d)


@given(dnnfs, st.lists(st.fractions(0, 1, max_denominator=20), min_size=9, max_size=9))
def test_probabilities_preserved(d, ps):
    w = {v: ps[v - 1] for v in d.universe}
    assert prob_fbdd(convert(d).fbdd, w) == prob_dnnf(d, w)
    wf = {v: float(p) for v, p in w.items()}
    assert abs(prob_fbdd(convert(d).fbdd, wf) - float(prob_dnnf(d, w))) <= 1e-9


@given(dnnfs)
def test_vars_below_is_support(d):
    below = vars_below(d)
    assert below[d.root] <= d.universe
    # flipping a variable outside the root support never changes the value
    rng = random.Random(0)
    free = sorted(d.universe - below[d.root])
    for _ in range(5):
        a = {v: rng.randint(0, 1) for v in d.universe}
        for v in free:
            assert eval_dag(d, a) == eval_dag(d, {**a, v: 1 - a[v]})


@settings(max_examples=30)
@given(st.integers(0, 10 ** 6), st.integers(1, 3), st.integers(0, 8))
def test_monotone_weight_sweep(seed, k, which):
    f = gen_random_monotone_dnf(8, 6, k, seed)
    fb = convert(compile_formula(f)).fbdd
    v = which % 8 + 1
    rng = random.Random(seed)
    base = {u: Fraction(rng.randint(0, 10), 10) for u in f.universe}
    values = [prob_fbdd(fb, {**base, v: Fraction(i, 10)}) for i in range(11)]
    assert values == sorted(values)
