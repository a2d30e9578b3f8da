import pytest
from hypothesis import assume, given, strategies as st

from hexsing.spheretri import catalog
from hexsing.spheretri.cut import NoCutError, general_cut, reduces
from hexsing.spheretri.plan import decomposition_plan
from hexsing.spheretri.triangulation import (
    format_signature,
    icosahedron,
    random_triangulation,
    signature,
    split,
)
from oracles import all_simple_cycles, reducing


def sigs(ts):
    return sorted(format_signature(signature(t)) for t in ts)


@pytest.mark.parametrize(
    "name, halves, case_prefix",
    [
        ("(0,4,4,1)", ["(0,4,4)", "(0,4,4)"], "0"),
        ("(3,0,3,1)", ["(1,3,3)", "(2,2,2)"], "1c"),
        ("(4,0,0,4)", ["(1,3,3,1)", "(3,0,3,1)"], "3d"),
    ],
)
def test_general_cut_examples(name, halves, case_prefix):
    t = catalog.representative(name)
    r = general_cut(t)
    assert r.case == case_prefix
    assert sigs(split(t, r.cycle)) == halves
    assert r.base_case == (case_prefix in ("1c", "3d"))


def test_general_cut_needs_high_degree():
    with pytest.raises(NoCutError):
        general_cut(icosahedron())


def test_reduces_matches_oracle_on_small_cases():
    t = catalog.representative("(0,4,4,1)")
    for c in all_simple_cycles(t):
        assert reduces(t, c) == reducing(t, c)


@given(st.integers(0, 10**6), st.integers(7, 24))
def test_general_cut_property(seed, n):
    t = random_triangulation(seed, n)
    assume(max(t.degrees) >= 6)
    r = general_cut(t)
    halves = split(t, r.cycle)
    if r.base_case:
        assert all(h.is_terminal() or catalog.match(h) for h in halves)
    else:
        assert all(h.n < t.n for h in halves)
        assert reducing(t, r.cycle)


@given(st.integers(0, 10**6), st.integers(7, 24))
def test_plan_terminates_with_terminal_leaves(seed, n):
    t = random_triangulation(seed, n)
    plan = decomposition_plan(t)
    assert all(leaf.triangulation.is_terminal() for leaf in plan.leaves())
    for node in plan.nodes():
        u = node.triangulation
        assert u.n - len(u.edges) + len(u.triangles) == 2
        assert sum(6 - d for d in u.degrees) == 12
    assert plan.depth() <= t.n
