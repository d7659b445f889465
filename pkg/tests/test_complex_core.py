import itertools
import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from homcode.complex_core import (
    BUILDERS,
    Cell,
    CellComplex,
    boundary_matrix,
    coboundary_matrix,
    dual_complex,
    interval,
    manifold_boundary,
    sphere_cube,
    sphere_simplex,
    square_grid,
    torus_grid,
    validate_complex,
)
from homcode.exceptions import AdmissibilityError, DegreeError, StructureError

from conftest import FIXTURES


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_fixtures_are_admissible(name):
    c = FIXTURES[name]()
    report = validate_complex(c)
    assert report.admissible, report.messages()
    for k in range(1, c.dimension):
        prod = boundary_matrix(c, k) @ boundary_matrix(c, k + 1)
        assert not prod.any()


@pytest.mark.parametrize(
    "name, counts, chi",
    [
        ("circle3", (3, 3), 0),
        ("interval3", (4, 3), 1),
        ("torus22", (4, 8, 4), 0),
        ("torus33", (9, 18, 9), 0),
        ("square22", (9, 12, 4), 1),
        ("cube", (8, 12, 6), 2),
        ("rp2", (6, 15, 10), 1),
    ],
)
def test_counts_and_euler_characteristic(name, counts, chi):
    c = FIXTURES[name]()
    assert c.counts() == counts
    assert c.euler_characteristic() == chi


@given(st.integers(1, 5), st.integers(1, 5))
def test_torus_grid_is_a_closed_surface(p, q):
    c = torus_grid(p, q)
    assert c.counts() == (p * q, 2 * p * q, p * q)
    bd = boundary_matrix(c, 2)
    assert not bd.sum(axis=1).any()
    if p > 1 and q > 1:
        # every edge bounds exactly two faces with opposite signs
        assert (np.abs(bd).sum(axis=1) == 2).all()
    assert validate_complex(c).admissible


@given(st.integers(1, 4), st.integers(1, 4))
def test_square_grid_boundary_is_the_perimeter(p, q):
    c = square_grid(p, q)
    edges = {x for x in manifold_boundary(c) if c.cells[x].dim == 1}
    assert len(edges) == 2 * (p + q)


@given(st.integers(1, 4))
def test_sphere_simplex_euler(n):
    c = sphere_simplex(n)
    assert c.euler_characteristic() == 1 + (-1) ** n


def test_coboundary_is_transpose():
    c = sphere_cube()
    for k in range(2):
        assert (coboundary_matrix(c, k) == boundary_matrix(c, k + 1).T).all()


def test_json_roundtrip_preserves_matrices():
    c = FIXTURES["rp2"]()
    back = CellComplex.from_json(c.to_json())
    assert back.counts() == c.counts()
    for k in range(1, 3):
        assert (boundary_matrix(back, k) == boundary_matrix(c, k)).all()
    assert json.loads(back.to_json()) == json.loads(c.to_json())


def test_structure_errors():
    with pytest.raises(StructureError):
        CellComplex([Cell("e", 1, (("v", 1),))])
    with pytest.raises(StructureError):
        CellComplex([Cell("v", 0), Cell("v", 0)])
    with pytest.raises(StructureError):
        CellComplex.from_json("{not json")
    with pytest.raises(DegreeError):
        torus_grid(0, 2)


def test_broken_complex_is_rejected_by_dual():
    cells = [Cell("a", 0), Cell("b", 0), Cell("e", 1, (("a", -1), ("b", 1))),
             Cell("f", 2, (("e", 1),))]
    c = CellComplex(cells)
    report = validate_complex(c)
    assert not report.admissible
    assert "boundary_1 . boundary_2 != 0" in report.messages()
    with pytest.raises(AdmissibilityError):
        dual_complex(c)


@pytest.mark.parametrize("name", ["torus22", "torus23", "cube", "circle4"])
def test_dual_of_closed_manifold_transposes(name):
    c = FIXTURES[name]()
    n = c.dimension
    dual = dual_complex(c)
    assert validate_complex(dual).admissible
    for k in range(n + 1):
        assert dual.count(k) == c.count(n - k)
    for k in range(1, n + 1):
        # up to the lexicographic relabelling, the dual boundary is a transpose
        assert sorted(np.abs(boundary_matrix(dual, k)).sum(axis=0).tolist()) == sorted(
            np.abs(boundary_matrix(c, n - k + 1)).sum(axis=1).tolist()
        )


def test_closed_dual_of_interval_is_a_cw_complex():
    c = interval(3)
    dual = dual_complex(c, closed=True)
    assert validate_complex(dual).admissible
    assert dual.euler_characteristic() == c.euler_characteristic()


def test_builders_registry():
    for name in ("point", "circle", "interval", "torus_grid", "sphere_cube", "projective_plane_min"):
        assert name in BUILDERS


@pytest.mark.parametrize("make", [lambda: FIXTURES["rp2"](), lambda: sphere_simplex(2), lambda: sphere_simplex(3)])
def test_distinct_simplices_share_at_most_one_coface(make):
    c = make()
    for k in range(c.dimension):
        cof = {b: set(c.coboundary_cells(b)) for b in c.ids(k)}
        for b1, b2 in itertools.combinations(c.ids(k), 2):
            assert len(cof[b1] & cof[b2]) <= 1


def test_square_cells_can_share_two_cofaces():
    # the bound is special to simplicial data: on the 2 x 2 torus two edges bound the same two faces
    c = torus_grid(2, 2)
    cof = {b: set(c.coboundary_cells(b)) for b in c.ids(1)}
    assert max(len(cof[a] & cof[b]) for a, b in itertools.combinations(c.ids(1), 2)) == 2
