import pytest

from toric_refine import (
    build_complex,
    fixtures,
    from_state,
    import_triangulation,
    initial_state,
    psi,
    relative_adjacent,
    relative_walls,
)
from toric_refine.errors import NotTerminal, UnknownSimplex, ValidationFailure
from toric_refine.refinement import refinement_from_json


def figure_lists(fx):
    ref = fixtures.figure_refinement(fx)
    verts = [v.to_json() for v in ref.vertices.values()]
    facets = [sorted(f) for f in ref.facets]
    return verts, facets


def test_a1_refinement(a1_ref, at):
    assert len(a1_ref.vertices) == 9
    assert len(a1_ref.facets) == 8
    assert all(len(f) == 2 for f in a1_ref.facets)
    assert psi(a1_ref, [at(a1_ref, 3, 1, 0)]) == {"1", "2"}
    assert psi(a1_ref, [at(a1_ref, 4, 0, 0)]) == {"1"}


def test_a2_refinement(a2_ref, at):
    assert len(a2_ref.vertices) == 10
    assert len(a2_ref.facets) == 9
    assert psi(a2_ref, [at(a2_ref, 1, 1, 1)]) == {"1", "2", "3"}


def test_unramified_refinement_is_identity(triangle):
    ref = from_state(initial_state(triangle, 1))
    assert sorted(ref.vertices) == ["1", "2", "3"]
    assert [set(f) for f in ref.facets] == [{"1", "2", "3"}]
    for s in triangle.simplices:
        assert psi(ref, s) == s
    assert relative_walls(ref) == []


def test_from_state_requires_terminal(chain):
    with pytest.raises(NotTerminal):
        from_state(initial_state(chain, 4))


def test_import_of_drawn_a2_triangulation(triangle, a2_fx):
    verts, facets = figure_lists(a2_fx)
    ref = import_triangulation(triangle, 3, verts, facets)
    assert len(ref.facets) == 9


def test_import_rejects_overlapping_facet(triangle, a2_fx, at):
    verts, facets = figure_lists(a2_fx)
    ref = fixtures.figure_refinement(a2_fx)
    extra = sorted([at(ref, 3, 0, 0), at(ref, 0, 3, 0), at(ref, 1, 1, 1)])
    with pytest.raises(ValidationFailure) as exc:
        import_triangulation(triangle, 3, verts, facets + [extra])
    text = " ".join(exc.value.violations)
    assert "10 cells, expected 9" in text


def test_import_rejects_missing_facet(triangle, a2_fx):
    verts, facets = figure_lists(a2_fx)
    with pytest.raises(ValidationFailure):
        import_triangulation(triangle, 3, verts, facets[1:])


def test_import_rejects_bad_coordinates(chain):
    verts = [
        {"id": "a", "carrier": ["1"], "coords": {"1": 2}},
        {"id": "b", "carrier": ["2"], "coords": {"2": 2}},
        {"id": "c", "carrier": ["3"], "coords": {"3": 2}},
        {"id": "m", "carrier": ["1", "2"], "coords": {"1": 1, "2": 2}},
    ]
    with pytest.raises(ValidationFailure) as exc:
        import_triangulation(chain, 2, verts, [["a", "m"], ["m", "b"], ["b", "c"]])
    assert any("sum to 3" in v for v in exc.value.violations)


def test_single_vertex_base():
    C = build_complex([1], [[1]])
    ref = import_triangulation(C, 5, [{"id": "p", "carrier": ["1"], "coords": {"1": 5}}], [["p"]])
    assert list(ref.vertices) == ["p"]
    assert relative_walls(ref) == []


def test_psi_rejects_non_simplex(a1_ref, at):
    with pytest.raises(UnknownSimplex):
        psi(a1_ref, [at(a1_ref, 4, 0, 0), at(a1_ref, 0, 0, 4)])


def test_relative_walls_a1(a1_ref, at):
    walls = relative_walls(a1_ref)
    points = sorted(a1_ref.coord_tuple(next(iter(w.wall))) for w in walls)
    assert points == sorted([(3, 1, 0), (2, 2, 0), (1, 3, 0), (0, 3, 1), (0, 2, 2), (0, 1, 3)])
    w = next(w for w in walls if w.wall == {at(a1_ref, 2, 2, 0)})
    assert set(w.opposite) == {at(a1_ref, 3, 1, 0), at(a1_ref, 1, 3, 0)}


def test_relative_walls_a2(a2_ref):
    walls = relative_walls(a2_ref)
    assert len(walls) == 15
    assert sum(1 for w in walls if len(w.wall) == 1) == 6
    assert sum(1 for w in walls if len(w.wall) == 2) == 9


def test_relative_adjacent(a1_ref, a2_ref, at):
    assert relative_adjacent(a1_ref, at(a1_ref, 0, 4, 0)) == {"1", "3"}
    assert relative_adjacent(a1_ref, at(a1_ref, 2, 2, 0)) == frozenset()
    assert relative_adjacent(a2_ref, at(a2_ref, 3, 0, 0)) == {"2", "3"}


def test_edge_neighbour_is_unique(a2_ref, at):
    assert a2_ref.edge_neighbor[("1", "2")] == [at(a2_ref, 2, 1, 0)]


def test_json_round_trip(a2_ref):
    again = refinement_from_json(a2_ref.to_json())
    assert again.to_json() == a2_ref.to_json()
