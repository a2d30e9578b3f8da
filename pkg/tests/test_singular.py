from collections import Counter

import pytest
from hypothesis import given, strategies as st

from hexsing.hexmesh import HexMesh, pad_boundary
from hexsing.meshgen import cone_mesh, grid
from hexsing.singular import (
    VertexClass,
    classify_vertex,
    singular_edges,
    singular_incidence,
    singular_nodes,
    trace_curves,
)


def test_grid_has_no_singularities():
    m = grid(3, 3, 3)
    assert singular_edges(m) == ()
    g = trace_curves(m)
    assert g.nodes == () and g.curves == ()
    assert classify_vertex(m, 21) is VertexClass.REGULAR


def test_tetrahedron_cone():
    m = cone_mesh("tetrahedron")
    es = singular_edges(m)
    assert len(es) == 4 and {m.edge_degree[e] for e in es} == {3}
    assert classify_vertex(m, 0) is VertexClass.NODE
    g = trace_curves(m)
    assert g.nodes == (0,)
    assert len(g.curves) == 4
    assert all(len(c.edges) == 1 and c.ends == ("node", "boundary") for c in g.curves)


def test_icosahedron_cone():
    m = cone_mesh("icosahedron")
    es = singular_edges(m)
    assert len(es) == 12 and {m.edge_degree[e] for e in es} == {5}


def test_padded_tetrahedron_cone_curves():
    m = pad_boundary(cone_mesh("tetrahedron"))
    g = trace_curves(m)
    assert 0 in g.nodes
    from_centre = [c for c in g.curves if 0 in (c.vertices[0], c.vertices[-1])]
    assert len(from_centre) == 4
    assert all(c.valence == 3 and c.ends == ("node", "boundary") for c in from_centre)
    # each runs through a former boundary point, now interior, out to its padded copy
    assert sorted(c.vertices[1] for c in from_centre) == [1, 2, 3, 4]
    assert not any(m.is_boundary_vertex(c.vertices[1]) for c in from_centre)


def test_curve_interior_vertex_of_padded_prism():
    m = pad_boundary(cone_mesh("(2,3,0)"))
    assert classify_vertex(m, 0) is VertexClass.CURVE_INTERIOR


def test_boundary_singular_vertex():
    m = cone_mesh("tetrahedron")
    v = next(v for v in range(1, m.n_vertices) if singular_incidence(m).get(v))
    assert classify_vertex(m, v) is VertexClass.BOUNDARY_SINGULAR


def check_graph(m):
    g = trace_curves(m)
    owned = Counter(e for c in g.curves for e in c.edges)
    assert set(owned) == set(g.edges) and set(owned.values()) <= {1}
    inc = singular_incidence(m)
    for c in g.curves:
        if c.closed:
            assert c.vertices[0] == c.vertices[-1] == min(c.vertices)
        else:
            assert c.vertices[0] <= c.vertices[-1]
            for v in c.vertices[1:-1]:
                assert len(inc[v]) == 2 and not m.is_boundary_vertex(v)
    # handshake: curve ends plus twice the interior curve vertices count every singular edge end once
    ends = sum(2 * (len(c.vertices) - 2) + (0 if c.closed else 2) + (2 if c.closed else 0) for c in g.curves)
    assert ends == 2 * len(g.edges)
    return g


@pytest.mark.parametrize("name", ["(2,2,2)", "(0,4,4)", "(1,3,3,1)", "(0,2,8)"])
def test_padded_cones_graph_partition(name):
    check_graph(pad_boundary(cone_mesh(name)))


@given(st.sampled_from(["(4,0,0)", "(1,3,3)", "(2,3,0,2)"]), st.randoms(use_true_random=False))
def test_trace_is_stable_under_hex_permutation(name, rnd):
    m = pad_boundary(cone_mesh(name))
    hexes = list(m.hexes)
    rnd.shuffle(hexes)
    s = HexMesh(m.vertices, hexes)
    a, b = trace_curves(m), trace_curves(s)
    assert a.nodes == b.nodes
    assert [c.vertices for c in a.curves] == [c.vertices for c in b.curves]
    assert singular_nodes(s) == singular_nodes(m)
