from fractions import Fraction

import pytest

from fbddkit import DagBuilder, Flavor, compile_formula, convert, count_dnnf, count_fbdd, prob_dnnf, prob_fbdd
from fbddkit.counting import InexactCountError, MissingWeightError, uniform
from fbddkit.generators import gen_phi, gen_triangle
from fbddkit.oracle import brute_count


def single(var=1, universe=None):
    b = DagBuilder()
    return b.build(b.decision(var, b.sink(0), b.sink(1)), Flavor.FBDD, universe or [var])


def test_one_sink_prob_and_count():
    b = DagBuilder()
    one = b.build(b.sink(1), Flavor.FBDD, range(1, 6))
    assert prob_fbdd(one, uniform(one.universe)) == 1
    assert count_fbdd(one) == 32


def test_single_decision_reads_weight():
    assert prob_fbdd(single(), {1: 0.3}) == pytest.approx(0.3)
    assert prob_fbdd(single(), {1: Fraction(3, 10)}) == Fraction(3, 10)
    assert count_fbdd(single()) == 1


def test_float_weights_give_float():
    assert isinstance(prob_fbdd(single(), {1: 0.25}), float)


def test_missing_weight_names_variable():
    with pytest.raises(MissingWeightError) as info:
        prob_fbdd(single(7), {})
    assert info.value.var == 7


def test_weight_out_of_range():
    with pytest.raises(ValueError):
        prob_fbdd(single(), {1: Fraction(3, 2)})


def test_shared_dag_probability(shared_dag):
    w = uniform(shared_dag.universe)
    assert prob_dnnf(shared_dag, w) == Fraction(1, 4)
    assert prob_fbdd(convert(shared_dag).fbdd, w) == Fraction(1, 4)
    assert count_dnnf(shared_dag) == 4


def test_and_of_one_sinks():
    b = DagBuilder()
    dag = b.build(b.and_(b.sink(1), b.sink(1)), Flavor.DECISION_DNNF, [1, 2])
    assert count_dnnf(dag) == 4


def test_phi1_count():
    conv = convert(compile_formula(gen_phi(1)))
    assert count_fbdd(conv.fbdd, range(1, 4)) == 1


def test_triangle3_count_matches_enumeration():
    d = compile_formula(gen_triangle(3))
    assert count_dnnf(d) == brute_count(gen_triangle(3)) == 463


def test_and_rejected_in_fbdd_count(shared_dag):
    with pytest.raises(ValueError):
        count_fbdd(shared_dag)


def test_non_read_once_is_detected():
    b = DagBuilder()
    s0, s1 = b.sink(0), b.sink(1)
    root = b.decision(1, b.decision(1, s0, s1), s1)
    with pytest.raises(InexactCountError):
        count_fbdd(b.build(root, Flavor.FBDD, [1]))


def test_tested_var_outside_universe():
    with pytest.raises(ValueError):
        count_fbdd(single(3), universe=[1])


def test_larger_universe_scales_count():
    assert count_fbdd(single(1), universe=[1, 2, 3]) == 4
