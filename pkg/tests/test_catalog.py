import itertools

import pytest

from hexsing.spheretri import catalog
from hexsing.spheretri.plan import decomposition_plan, plan_size
from hexsing.spheretri.triangulation import (
    format_signature,
    icosahedron,
    is_isomorphic,
    join,
    octahedron,
    signature,
    split,
    tetrahedron,
)
from conftest import EXTENDED_TYPES, NODE_TYPES


def sigs(ts):
    return sorted(format_signature(signature(t)) for t in ts)


def test_catalog_covers_required_signatures():
    names = {e.name for e in catalog.catalog()}
    assert set(NODE_TYPES) <= names
    assert set(EXTENDED_TYPES) | {"(3,0,3,1)", "(4,0,0,4)"} <= names


@pytest.mark.parametrize("e", catalog.catalog(), ids=lambda e: e.name)
def test_entry_recipe_consistent(e):
    assert format_signature(e.signature) == e.name
    if e.terminal:
        assert e.triangulation.is_terminal()
        return
    halves = split(e.triangulation, e.recipe)
    total = 1 + sum(plan_size(h) for h in halves)
    assert total == e.plan_size


@pytest.mark.parametrize("ident", catalog.identities(), ids=str)
def test_identity_join_and_split(ident):
    left = catalog.representative(ident.left)
    right = catalog.representative(ident.right)
    lhs = catalog.representative(ident.lhs)
    assert left.degrees[ident.left_apex] == right.degrees[ident.right_apex] == ident.n
    assert is_isomorphic(join(left, ident.left_apex, right, ident.right_apex, ident.offset), lhs)
    assert sigs(split(lhs, catalog.entry(ident.lhs).recipe)) == sorted([ident.left, ident.right])


def test_tetrahedron_every_four_cycle_is_equivalent():
    t = tetrahedron()
    outcomes = set()
    for perm in itertools.permutations(range(4)):
        if perm[0] == 0:
            outcomes.add(tuple(sigs(split(t, perm))))
    assert outcomes == {("(2,3,0)", "(2,3,0)")}
    assert catalog.recipe_for(t) is not None


def test_icosahedron_roadmap():
    e = catalog.entry("(0,0,12)")
    assert is_isomorphic(e.triangulation, icosahedron())
    first = split(e.triangulation, e.recipe)
    assert sigs(first) == ["(0,2,8,1)", "(0,4,4,1)"]
    second = [sigs(split(h, catalog.recipe_for(h))) for h in first]
    assert sorted(second) == [["(0,3,6)", "(0,3,6)"], ["(0,4,4)", "(0,4,4)"]]


def test_match_gives_working_isomorphism():
    t = catalog.representative("(1,3,3)").relabeled([3, 0, 6, 1, 5, 2, 4])
    e, m = catalog.match(t)
    assert e.name == "(1,3,3)"
    assert {frozenset(m[v] for v in tri) for tri in e.triangulation.triangles} == {frozenset(x) for x in t.triangles}
    assert sigs(split(t, catalog.recipe_for(t))) == sigs(split(e.triangulation, e.recipe))


def test_plans_of_named_solids():
    assert decomposition_plan(octahedron()).how == "terminal"
    p = decomposition_plan(tetrahedron())
    assert p.splits() == 1 and [format_signature(x.signature) for x in p.leaves()] == ["(2,3,0)"] * 2
    ico = decomposition_plan(icosahedron())
    assert ico.splits() == 11  # one split per non-terminal tree node with our recipes
    assert all(leaf.triangulation.is_terminal() for leaf in ico.leaves())
    assert ico.to_dict()["signature"] == "(0,0,12)"


def test_icosahedron_sheet_count_within_budget():
    assert plan_size(icosahedron()) <= 12
