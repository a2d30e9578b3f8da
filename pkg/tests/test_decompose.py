import pytest

from hexsing.decompose import (
    RetriesExhausted,
    candidate_cycles,
    complexity,
    decompose_all,
    needs_padding,
    node_link,
)
from hexsing.hexmesh import validate
from hexsing.meshgen import cone_mesh, grid
from hexsing.singular import classify_vertex, singular_nodes, VertexClass
from hexsing.spheretri import catalog
from hexsing.spheretri.plan import plan_size
from hexsing.spheretri.triangulation import split


def check_success(mesh, log):
    assert log.success and log.remaining_nodes == []
    assert singular_nodes(mesh) == ()
    assert all(classify_vertex(mesh, v) is not VertexClass.NODE for v in range(mesh.n_vertices))
    assert validate(mesh).ok
    levels = [log.initial_complexity] + [s.complexity_after for s in log.steps]
    assert all(b < a for a, b in zip(levels, levels[1:]))
    assert levels[-1] == 0


def test_grid_is_left_alone():
    m = grid(3, 3, 3)
    out, log = decompose_all(m)
    assert out is m and log.steps == [] and log.success


def test_tetrahedron_cone_single_inflation():
    out, log = decompose_all(cone_mesh("(4,0,0)"), pad=False)
    check_success(out, log)
    assert len(log.steps) == 1
    step = log.steps[0]
    assert step.signature == "(4,0,0)" and step.halves == ["(2,3,0)", "(2,3,0)"]
    assert step.hexes_after == 4 + step.sheet_size


def test_padded_tetrahedron_cone():
    m = cone_mesh("(4,0,0)", pad=True)
    assert len(singular_nodes(m)) == 5
    out, log = decompose_all(m)
    check_success(out, log)


@pytest.mark.parametrize("name", ["(2,2,2)", "(1,3,3)", "(0,3,6)", "(1,3,3,1)"])
def test_unpadded_cones_decompose(name):
    out, log = decompose_all(cone_mesh(name), pad=False)
    check_success(out, log)
    assert len(log.steps) <= plan_size(node_link(cone_mesh(name), 0))


def test_every_intermediate_mesh_is_validated(monkeypatch):
    import hexsing.decompose as dec

    seen = []

    def recording(mesh):
        report = validate(mesh)
        seen.append(report.ok)
        return report

    monkeypatch.setattr(dec, "validate", recording)
    out, log = decompose_all(cone_mesh("(0,3,6)"), seed=3)
    check_success(out, log)
    assert len(seen) >= len(log.steps) and all(seen)
    for s in log.steps:
        assert len(s.cycle) >= 3 and len(s.halves) == 2


def test_determinism():
    m = cone_mesh("(0,2,8)")
    a = decompose_all(m, seed=7)
    b = decompose_all(m, seed=7)
    assert a[1].to_json() == b[1].to_json()
    assert a[0].hexes == b[0].hexes
    assert (a[0].vertices == b[0].vertices).all()


def test_retries_exhausted_reports_partial_result():
    m = cone_mesh("(2,2,2)", pad=True)
    with pytest.raises(RetriesExhausted) as info:
        decompose_all(m, max_retries=2)
    err = info.value
    assert not err.log.success
    assert err.log.remaining_nodes == list(singular_nodes(err.mesh))
    assert validate(err.mesh).ok


def test_auto_padding_rule():
    m = cone_mesh("(4,0,0)")
    assert not needs_padding(m)  # the node itself is interior
    assert needs_padding(grid(1, 1, 1)) is False


def test_complexity_counts_plan_sizes():
    m = cone_mesh("(0,0,12)")
    assert complexity(m) == catalog.entry("(0,0,12)").plan_size


def test_candidates_start_with_catalog_recipe_and_all_reduce():
    t = catalog.representative("(2,0,6)")
    cands = list(candidate_cycles(t))
    assert cands[0] == (catalog.recipe_for(t), "catalog")
    base = plan_size(t)
    for c, how in cands:
        assert sum(plan_size(h) for h in split(t, c)) < base, how


def test_config_overrides():
    with pytest.raises(TypeError):
        decompose_all(grid(1, 1, 1), colour="red")
