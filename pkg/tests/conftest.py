import os
from pathlib import Path

import hypothesis
import pytest

from fbddkit import DagBuilder, Flavor, dnf

hypothesis.settings.register_profile("default", max_examples=60, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=10, deadline=None)
hypothesis.settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

DATA = Path(__file__).parent / "data"
X, Y, Z, U = 1, 2, 3, 4
FIG_NAMES = {X: "X", Y: "Y", Z: "Z", U: "U"}


def shared_dag_example():
    """Decision on X; 0 -> v1 AND v2, 1 -> v1 AND v3, with v1 = Y shared."""
    b = DagBuilder()
    zero = b.sink(0)
    v1 = b.decision(Y, zero, b.sink(1))
    v2 = b.decision(Z, zero, b.sink(1))
    v3 = b.decision(U, zero, b.sink(1))
    root = b.decision(X, b.and_(v1, v2), b.and_(v1, v3))
    return b.build(root, Flavor.DECISION_DNNF, [X, Y, Z, U], FIG_NAMES)


def shared_dag_formula():
    """(not X) Y Z or X Y U"""
    return dnf([(-X, Y, Z), (X, Y, U)], [X, Y, Z, U], FIG_NAMES)


@pytest.fixture
def shared_dag():
    return shared_dag_example()


@pytest.fixture
def shared_formula():
    return shared_dag_formula()


@pytest.fixture
def data_dir():
    return DATA


def pytest_terminal_summary(terminalreporter):
    import sys
    module = sys.modules.get("test_acceptance")
    if module is not None and module.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in module.RESULTS:
            terminalreporter.write_line(line)
