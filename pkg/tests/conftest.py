import itertools

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from posetcorr.poset import Poset, from_relations
from posetcorr.search import isomorphism_classes

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@st.composite
def posets(draw, min_n: int = 0, max_n: int = 7) -> Poset:
    """Random poset: a DAG on 0..n-1 whose edges go from lower to higher
    index, then relabeled by a random permutation."""
    n = draw(st.integers(min_n, max_n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs))) if pairs else []
    perm = draw(st.permutations(range(n)))
    return from_relations(n, [(perm[i], perm[j]) for i, j in edges])


def all_posets(max_n: int, min_n: int = 0):
    for n in range(min_n, max_n + 1):
        yield from isomorphism_classes(n)


def nonempty_subsets(mask: int):
    elems = [i for i in range(mask.bit_length()) if mask >> i & 1]
    for r in range(1, len(elems) + 1):
        for combo in itertools.combinations(elems, r):
            yield sum(1 << e for e in combo)


@pytest.fixture(scope="session")
def small_posets():
    return list(all_posets(6))


# acceptance lines collected by tests/test_acceptance.py
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
