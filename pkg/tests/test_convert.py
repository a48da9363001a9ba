import math

import pytest

from fbddkit import DagBuilder, Decision, Flavor, NoOp, Sink, convert, isomorphic, max_ands_on_path, normalize, validate
from fbddkit.compiler import compile_formula
from fbddkit.convert import EdgeClass, classify_and_order, quasipoly_bound, to_fbdd
from fbddkit.dag import And
from fbddkit.generators import gen_phi, gen_tight_example
from fbddkit.oracle import equivalent, find_counterexample, light_edge_sets

from conftest import Y


def no_and_dag():
    b = DagBuilder()
    s0 = b.sink(0)
    c = b.decision(2, s0, b.sink(1))
    root = b.decision(1, c, b.decision(3, s0, b.sink(1)))
    return b.build(root, Flavor.DECISION_DNNF, [1, 2, 3])


def test_classify_without_ands():
    cl = classify_and_order(normalize(no_and_dag()))
    assert (cl.counts.total, cl.counts.light_depth) == (0, 0)
    assert set(cl.edges.values()) == {EdgeClass.NEUTRAL}


def test_classify_shared_dag(shared_dag):
    cl = classify_and_order(normalize(shared_dag))
    assert (cl.counts.total, cl.counts.light_depth) == (2, 1)
    for (u, slot), kind in cl.edges.items():
        node = cl.dag.nodes[u]
        assert kind is ({0: EdgeClass.LIGHT, 1: EdgeClass.HEAVY}[slot] if isinstance(node, And)
                        else EdgeClass.NEUTRAL)


def test_classify_rejects_unnormalized():
    b = DagBuilder()
    one = b.sink(1)
    root = b.decision(1, b.decision(2, b.sink(0), one), one)
    with pytest.raises(ValueError):
        classify_and_order(b.build(root, Flavor.DECISION_DNNF))


def test_classify_swaps_heavier_first_child():
    b = DagBuilder()
    leaf = b.decision(1, b.sink(0), b.sink(1))
    heavy = b.and_(b.decision(2, b.sink(0), b.sink(1)), b.decision(3, b.sink(0), b.sink(1)))
    root = b.and_(heavy, leaf)
    cl = classify_and_order(normalize(b.build(root, Flavor.DECISION_DNNF)))
    top = cl.dag.nodes[cl.dag.root]
    below = cl.counts.below
    assert below[top.children[0]] == 0 and below[top.children[1]] == 1


def test_tight_p2_and_count():
    cl = classify_and_order(normalize(gen_tight_example(2)))
    m = 3
    assert cl.counts.total == m * (m + 1)


def test_to_fbdd_without_ands_is_identity():
    norm = normalize(no_and_dag())
    out, origin = to_fbdd(classify_and_order(norm))
    assert all(s == () for _, s in origin)
    assert isomorphic(out, norm)


def test_shared_dag_gets_two_copies_of_shared_node(shared_dag):
    conv = convert(shared_dag)
    src = conv.source.dag
    (shared,) = [i for i, n in enumerate(src.nodes) if isinstance(n, Decision) and n.var == Y]
    copies = [s for u, s in conv.origin if u == shared]
    assert len(copies) == 2
    assert {len(s) for s in copies} == {1}
    # each copy's 1-sink continues into a different heavy sibling
    heavies = {src.nodes[src.nodes[s[0]].children[1]].var for s in copies}
    assert heavies == {3, 4}


def test_shared_dag_output_function(shared_dag, shared_formula):
    conv = convert(shared_dag)
    assert find_counterexample(conv.fbdd, shared_formula) is None
    assert find_counterexample(conv.with_noops, shared_formula) is None
    assert validate(conv.fbdd).ok and validate(conv.with_noops).ok


def test_shared_dag_report(shared_dag):
    r = convert(shared_dag).report
    assert (r.M, r.L) == (2, 1)
    assert r.N == len(normalize(shared_dag).nodes)
    assert r.bound == r.N * 2
    assert max_ands_on_path(shared_dag) == 1


def test_one_sink_conversion():
    b = DagBuilder()
    conv = convert(b.build(b.sink(1), Flavor.DECISION_DNNF))
    r = conv.report
    assert (r.N, r.M, r.L, r.bound) == (1, 0, 0, 1)
    assert conv.fbdd.nodes == (Sink(1),)
    assert list(r.to_dict()) == ["N", "M", "L", "out_nodes_with_noops", "out_nodes_final",
                                 "bound", "quasipoly_bound"]


def test_phi2_within_cubic_bound():
    conv = convert(compile_formula(gen_phi(2)))
    assert len(conv.fbdd.nodes) <= conv.report.N ** 3
    assert equivalent(conv.source.dag, conv.fbdd)


def test_max_ands_without_ands():
    assert max_ands_on_path(no_and_dag()) == 0


def test_quasipoly_bound_small():
    assert quasipoly_bound(1) == 1
    assert quasipoly_bound(2) == 4
    assert quasipoly_bound(4) == 4 * 2 ** 4
    for n in range(2, 200):
        assert quasipoly_bound(n) <= n * 2 ** (math.log2(n) ** 2)


def test_tight_copies_match_light_edge_sets():
    conv = convert(gen_tight_example(2))
    cl = conv.source
    sets = light_edge_sets(cl.dag, {z: cl.light_child(z) for z, n in enumerate(cl.dag.nodes)
                                    if isinstance(n, And)})
    per_node: dict[int, int] = {}
    for u, _ in conv.origin:
        per_node[u] = per_node.get(u, 0) + 1
    assert per_node == {u: len(s) for u, s in sets.items() if s}


def test_noop_nodes_only_for_ands_and_inner_one_sinks(shared_dag):
    conv = convert(shared_dag)
    src = conv.source.dag.nodes
    for i, node in enumerate(conv.with_noops.nodes):
        u, s = conv.origin[i]
        if isinstance(node, NoOp):
            assert isinstance(src[u], And) or (src[u] == Sink(1) and s)


def test_shared_constant_subdag_breaks_light_depth_inequality():
    # AND nodes over one shared variable-free child are decomposable but not disjoint
    b = DagBuilder()
    node = b.sink(1)
    for _ in range(4):
        node = b.and_(node, node)
    root = b.decision(1, b.sink(0), node)
    dag = b.build(root, Flavor.DECISION_DNNF, [1])
    assert validate(dag).ok
    conv = convert(dag)
    r = conv.report
    assert (r.M, r.L) == (4, 4) and 2 ** r.L > r.M + 1
    assert equivalent(dag, conv.fbdd) and validate(conv.fbdd).ok
