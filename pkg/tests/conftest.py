import random
import sys

from hypothesis import strategies as st

from cubical_thompson.sampling import random_element, random_point, random_tree, random_vertex

seeds = st.integers(min_value=0, max_value=2**32 - 1)


@st.composite
def trees(draw, max_size=8):
    n = draw(st.integers(min_value=0, max_value=max_size))
    return random_tree(n, random.Random(draw(seeds)))


@st.composite
def elements(draw, max_size=5):
    n = draw(st.integers(min_value=0, max_value=max_size))
    return random_element(n, random.Random(draw(seeds)))


@st.composite
def vertices(draw, max_degree=4):
    d = draw(st.integers(min_value=1, max_value=max_degree))
    return random_vertex(d, random.Random(draw(seeds)))


@st.composite
def points(draw, max_degree=3):
    d = draw(st.integers(min_value=1, max_value=max_degree))
    return random_point(d, random.Random(draw(seeds)))


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    if acceptance is None or not acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in acceptance.summary_lines():
        terminalreporter.write_line(line)
