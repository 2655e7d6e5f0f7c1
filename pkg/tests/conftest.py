import random
import sys

import pytest
from hypothesis import strategies as st

from lbz.term import Leaf, Mul


def trees(max_leaves: int = 7, max_index: int = 9):
    """Hypothesis strategy for arbitrary terms with at most ``max_leaves`` leaves."""
    leaf = st.integers(min_value=1, max_value=max_index).map(Leaf)
    return st.recursive(leaf, lambda kids: st.builds(Mul, kids, kids), max_leaves=max_leaves)


def multilinear_trees(n: int):
    @st.composite
    def build(draw):
        letters = draw(st.permutations(list(range(1, n + 1))))

        def split(ls):
            if len(ls) == 1:
                return Leaf(ls[0])
            cut = draw(st.integers(1, len(ls) - 1))
            return Mul(split(ls[:cut]), split(ls[cut:]))

        return split(letters)

    return build()


@pytest.fixture
def rng():
    return random.Random(20240611)


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    if acceptance is None or not acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(acceptance.RESULTS):
        terminalreporter.write_line(acceptance.RESULTS[number])
