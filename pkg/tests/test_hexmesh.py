import numpy as np
import pytest
from hypothesis import given, strategies as st

from hexsing.hexmesh import (
    HEX_EDGES,
    HEX_FACES,
    HexMesh,
    MeshError,
    build_adjacency,
    pad_boundary,
    validate,
)
from hexsing.meshgen import cone_mesh, grid
from hexsing.singular import singular_nodes
from hexsing.spheretri.triangulation import format_signature, signature
from oracles import grid_counts

UNIT = [(0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0), (0, 0, 1), (1, 0, 1), (1, 1, 1), (0, 1, 1)]


def check_face_counts(mesh):
    n_int = sum(1 for hs in mesh.face_hexes if len(hs) == 2)
    n_bnd = sum(1 for hs in mesh.face_hexes if len(hs) == 1)
    assert all(len(hs) in (1, 2) for hs in mesh.face_hexes)
    assert 6 * mesh.n_hexes == 2 * n_int + n_bnd
    return n_int, n_bnd


def test_local_tables_are_consistent():
    # every edge lies on exactly two faces, each face edge is a hex edge
    edges = {frozenset(e) for e in HEX_EDGES}
    seen = {}
    for f in HEX_FACES:
        for i in range(4):
            e = frozenset((f[i], f[(i + 1) % 4]))
            assert e in edges
            seen[e] = seen.get(e, 0) + 1
    assert set(seen.values()) == {2} and len(seen) == 12


def test_faces_point_outward_on_unit_cube():
    X = np.array(UNIT, dtype=float)
    centre = X.mean(axis=0)
    for f in HEX_FACES:
        q = X[list(f)]
        n = np.cross(q[1] - q[0], q[3] - q[0])
        assert n @ (q.mean(axis=0) - centre) > 0


def test_single_hex():
    m = build_adjacency(UNIT, [tuple(range(8))])
    assert len(m.faces) == 6 and len(m.boundary_faces) == 6
    assert len(m.edges) == 12 and set(m.edge_degree) == {1}
    assert validate(m).ok


@pytest.mark.parametrize("dims", [(3, 3, 3), (2, 1, 1), (1, 2, 3), (4, 1, 2)])
def test_grid_counts_match_closed_form(dims):
    m = grid(*dims)
    V, F, E, B = grid_counts(*dims)
    assert (m.n_vertices, len(m.faces), len(m.edges), len(m.boundary_faces)) == (V, F, E, B)
    assert all(d == 4 for e, d in enumerate(m.edge_degree) if not m.boundary_edge_mask[e])
    assert validate(m).ok
    check_face_counts(m)


def test_three_cube_grid_example():
    m = grid(3, 3, 3)
    assert (m.n_vertices, m.n_hexes, len(m.faces), len(m.edges)) == (64, 27, 108, 144)


def test_two_hex_grid_has_one_shared_face():
    m = grid(2, 1, 1)
    assert check_face_counts(m) == (1, 10)


def test_constructor_errors():
    with pytest.raises(MeshError):
        HexMesh(UNIT, [(0, 1, 2, 3, 4, 5, 6)])
    with pytest.raises(MeshError):
        HexMesh(UNIT, [(0, 1, 2, 3, 4, 5, 6, 8)])
    with pytest.raises(MeshError):
        HexMesh(UNIT, [(0, 1, 2, 3, 4, 5, 6, 6)])


def test_two_hexes_sharing_only_an_edge():
    # second cube is diagonal to the first, touching it along the edge x=1,y=1
    X = UNIT + [(2, 1, 0), (2, 2, 0), (1, 2, 0), (2, 1, 1), (2, 2, 1), (1, 2, 1)]
    hexes = [tuple(range(8)), (2, 8, 9, 10, 6, 11, 12, 13)]
    m = HexMesh(X, hexes)
    e = m.edge_id(2, 6)
    assert m.edge_degree[e] == 2
    report = validate(m)
    assert "edge_degree" in report.kinds()


def test_three_hexes_on_one_face():
    X = UNIT + [(0, 0, -1), (1, 0, -1), (1, 1, -1), (0, 1, -1), (0, 0, 2), (1, 0, 2), (1, 1, 2), (0, 1, 2)]
    hexes = [tuple(range(8)), (8, 9, 10, 11, 0, 1, 2, 3), (12, 13, 14, 15, 0, 1, 2, 3)]
    m = HexMesh(X, hexes)
    assert "face_sharing" in validate(m).kinds()


def test_flipped_hex_reports_orientation():
    m = grid(2, 1, 1)
    h = m.hexes[1]
    flipped = (h[4], h[5], h[6], h[7], h[0], h[1], h[2], h[3])
    assert "orientation" in validate(HexMesh(m.vertices, [m.hexes[0], flipped])).kinds()


def test_edge_records():
    m = grid(2, 2, 2)
    centre = 13
    recs = [m.edge_record(e) for e in m.vertex_edges[centre]]
    assert len(recs) == 6
    assert all(r.interior and r.degree == 4 for r in recs)
    boundary = [r for r in m.edge_records() if not r.interior]
    assert all(r.degree >= 1 for r in boundary)


@pytest.mark.parametrize("dims, hexes", [((1, 1, 1), 7), ((3, 3, 3), 81)])
def test_pad_grid(dims, hexes):
    m = grid(*dims)
    p = pad_boundary(m)
    assert p.n_hexes == hexes == m.n_hexes + len(m.boundary_faces)
    assert validate(p).ok


def test_pad_tetrahedron_cone():
    m = cone_mesh("tetrahedron")
    assert len(m.boundary_faces) == 12
    p = pad_boundary(m)
    assert p.n_hexes == 16 and validate(p).ok
    assert format_signature(signature(p.vertex_link(0).triangulation())) == "(4,0,0)"
    # every former triangle-centre point becomes an interior (4,0,0) node as well
    assert len(singular_nodes(p)) == 5


def test_vertex_link_of_grid_centre_is_octahedron():
    m = grid(3, 3, 3)
    v = 1 + 4 * (1 + 4 * 1)
    t = m.vertex_link(v).triangulation()
    assert signature(t) == (0, 6, 0)


def test_vertex_link_rejects_boundary_vertex():
    m = grid(1, 1, 1)
    assert m.vertex_link(0).disk_problems() == []
    with pytest.raises(ValueError):
        m.vertex_link(0).triangulation()


@given(st.integers(1, 3), st.integers(1, 3), st.integers(1, 3), st.randoms(use_true_random=False))
def test_face_bookkeeping_and_hex_order_invariance(nx, ny, nz, rnd):
    m = grid(nx, ny, nz)
    hexes = list(m.hexes)
    rnd.shuffle(hexes)
    s = HexMesh(m.vertices, hexes)
    assert s.faces == m.faces and s.edges == m.edges
    assert sorted(s.edge_degree) == sorted(m.edge_degree)
    check_face_counts(s)
    assert validate(s).ok
