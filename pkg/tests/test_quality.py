import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.spatial.transform import Rotation

from hexsing.hexmesh import HEX_EDGES
from hexsing.meshgen import cone_mesh, grid
from hexsing.quality import (
    OptimizeParams,
    hex_jacobians,
    mesh_bound,
    optimize,
    quality_report,
    scaled_jacobian,
    theoretical_bound,
)
from oracles import corner_jacobian_bruteforce

UNIT = np.array([(0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0), (0, 0, 1), (1, 0, 1), (1, 1, 1), (0, 1, 1)], float)


def right_handed_order():
    """Neighbour triples per corner, derived from the edge table and the unit cube, not from the library."""
    out = []
    for c in range(8):
        nb = [b if a == c else a for a, b in HEX_EDGES if c in (a, b)]
        E = UNIT[nb] - UNIT[c]
        if np.linalg.det(E) < 0:
            nb[1], nb[2] = nb[2], nb[1]
        out.append(tuple(nb))
    return out


ORDER = right_handed_order()


def test_unit_cube_and_degenerate():
    assert scaled_jacobian(UNIT) == pytest.approx(1.0, abs=1e-15)
    bad = UNIT.copy()
    bad[6] = bad[7]
    assert scaled_jacobian(bad) == 0.0


def test_inverted_hex_is_negative():
    flipped = UNIT[[4, 5, 6, 7, 0, 1, 2, 3]]
    assert scaled_jacobian(flipped) == pytest.approx(-1.0)


@pytest.mark.parametrize("shear", [0.0, 0.3, 0.9, -1.7])
def test_sheared_parallelepiped_matches_oracle(shear):
    A = np.array([[1.0, shear, 0.2], [0.0, 1.0, shear], [0.0, 0.0, 1.3]])
    P = UNIT @ A.T
    assert scaled_jacobian(P) == pytest.approx(corner_jacobian_bruteforce(P, ORDER), abs=1e-14)


@given(
    st.lists(st.floats(-0.3, 0.3), min_size=24, max_size=24),
    st.floats(0.01, 100.0),
    st.integers(0, 10**6),
    st.lists(st.floats(-50, 50), min_size=3, max_size=3),
)
def test_similarity_invariance(noise, scale, seed, shift):
    P = UNIT + np.array(noise).reshape(8, 3)
    R = Rotation.random(random_state=seed).as_matrix()
    Q = scale * P @ R.T + np.array(shift)
    assert abs(scaled_jacobian(P) - scaled_jacobian(Q)) < 1e-12
    assert abs(scaled_jacobian(P) - corner_jacobian_bruteforce(P, ORDER)) < 1e-12


def test_bounds():
    assert theoretical_bound("(4,0,0)") == pytest.approx(4 / (3 * math.sqrt(3)))
    assert theoretical_bound((4, 0, 0)) == pytest.approx(0.7698, abs=1e-4)
    assert theoretical_bound("(0,0,12)") == pytest.approx(0.761, abs=1e-3)
    assert theoretical_bound(3) == pytest.approx(0.866, abs=1e-3)
    assert theoretical_bound(5) == pytest.approx(0.9511, abs=1e-4)
    assert theoretical_bound(6) == pytest.approx(0.866, abs=1e-3)
    assert theoretical_bound("(2,2,2)") is None
    assert theoretical_bound(4) == pytest.approx(1.0)  # regular edges do not constrain


def test_mesh_bound_takes_the_smallest():
    value, reason = mesh_bound(cone_mesh("(4,0,0)"))
    assert reason == "node (4,0,0)" and value == pytest.approx(4 / (3 * math.sqrt(3)))
    assert mesh_bound(grid(2, 2, 2)) == (None, None)


def test_report_fields():
    r = quality_report(cone_mesh("(2,2,2)"))
    assert -1 <= r.minimum <= r.mean <= 1
    assert r.per_hex[r.worst_hex] == r.minimum
    assert set(r.to_dict()) >= {"minimum", "mean", "worst_hex", "bound", "bound_reason", "per_hex"}


def test_perfect_grid_is_unchanged():
    m = grid(2, 2, 2)
    out, r = optimize(m, OptimizeParams(restarts=0))
    assert r.minimum == pytest.approx(1.0, abs=1e-12)
    assert np.abs(out.vertices - m.vertices).max() < 1e-6


def test_history_is_monotone_and_connectivity_kept():
    m = cone_mesh("(2,2,2)")
    out, r = optimize(m, OptimizeParams(restarts=2, max_iters=100, polish_iters=50))
    assert out.hexes == m.hexes
    assert all(b >= a for a, b in zip(r.history, r.history[1:]))
    assert r.history[0] == pytest.approx(hex_jacobians(m).min())
    assert r.minimum == pytest.approx(r.history[-1])
    assert r.minimum >= quality_report(m).minimum


def test_fixed_boundary_mode_keeps_boundary():
    m = cone_mesh("(1,3,3)")
    out, _ = optimize(m, OptimizeParams(mode="fixed-boundary", restarts=1, max_iters=50, polish_iters=20))
    moved = np.abs(out.vertices - m.vertices).max(axis=1)
    assert all(moved[v] == 0 for v in range(m.n_vertices) if m.is_boundary_vertex(v))
    assert moved.max() > 0


def test_optimizer_is_deterministic():
    m = cone_mesh("(4,0,0)")
    p = OptimizeParams(restarts=2, max_iters=60, polish_iters=30, seed=5)
    a, b = optimize(m, p), optimize(m, p)
    assert (a[0].vertices == b[0].vertices).all() and a[1].history == b[1].history


def test_tetrahedron_cone_respects_its_bound():
    _, r = optimize(cone_mesh("(4,0,0)"), OptimizeParams(restarts=1))
    assert 0.74 <= r.minimum <= r.bound + 1e-6


@pytest.mark.parametrize("kwargs", [{"mode": "loose"}, {"tol": 0}, {"max_iters": 0}])
def test_params_validation(kwargs):
    with pytest.raises(ValueError):
        OptimizeParams(**kwargs)
