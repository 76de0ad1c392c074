import itertools

import pytest

from lstorus.faceposet import FacePoset, PosetError, validate_poset
from lstorus.fixtures import (
    cube_poset,
    half_plane_poset,
    pentagon_poset,
    polygon_poset,
    prism_poset,
    product_poset,
    segment_poset,
    simplex_poset,
    square_poset,
    triangle_poset,
)


def test_square_is_valid():
    report = validate_poset(square_poset())
    assert report.valid
    assert report.violations == ()


def test_simplices_cubes_products_valid():
    for n in range(1, 5):
        assert validate_poset(simplex_poset(n)).valid, f"simplex {n}"
        assert validate_poset(cube_poset(n)).valid, f"cube {n}"
    assert validate_poset(product_poset(simplex_poset(2), simplex_poset(2))).valid
    assert validate_poset(prism_poset()).valid
    assert validate_poset(product_poset(square_poset(), segment_poset())).valid


def test_half_plane_valid_non_compact():
    p = half_plane_poset()
    assert validate_poset(p).valid
    assert p.faces_of_codim(2) == []


def test_vertex_under_three_facets_invalid():
    p = FacePoset(
        [("T", 0), ("A", 1), ("B", 1), ("C", 1), ("V", 2)],
        [("A", "T"), ("B", "T"), ("C", "T"), ("V", "A"), ("V", "B"), ("V", "C")],
        2,
    )
    report = validate_poset(p)
    assert not report.valid
    assert any(v.kind == "niceness" and v.faces == ("V",) for v in report.violations)


def test_two_top_faces_invalid():
    p = FacePoset([("T1", 0), ("T2", 0)], [], 1)
    report = validate_poset(p)
    assert not report.valid
    assert report.by_kind("top")


def test_grading_violation_reported():
    p = FacePoset([("T", 0), ("V", 2)], [("V", "T")], 2)
    report = validate_poset(p)
    assert not report.valid
    assert report.by_kind("grading")


def test_codim_bound_reported():
    p = FacePoset([("T", 0), ("E", 1)], [("E", "T")], 0)
    report = validate_poset(p)
    assert not report.valid
    assert report.by_kind("codim-bound")


def test_boolean_interval_violation():
    # A "vertex" below two facets but with a 3-element upper interval:
    # one of the two edges through it is missing.
    p = FacePoset(
        [("T", 0), ("A", 1), ("B", 1), ("V", 2)],
        [("A", "T"), ("B", "T"), ("V", "A")],
        2,
    )
    report = validate_poset(p)
    assert not report.valid


def test_construction_errors():
    with pytest.raises(PosetError):
        FacePoset([("T", 0), ("T", 1)], [], 1)
    with pytest.raises(PosetError):
        FacePoset([("T", 0)], [("T", "X")], 1)
    with pytest.raises(PosetError):
        FacePoset([("T", -1)], [], 1)
    with pytest.raises(PosetError):
        FacePoset([], [], 1)


def test_accessors_on_square():
    p = square_poset()
    assert p.facets() == ["E0", "E1", "E2", "E3"]
    assert p.facets_containing("V0") == ["E0", "E1"]
    assert p.facets_containing("T") == []
    assert p.faces_of_codim(2) == ["V0", "V1", "V2", "V3"]
    with pytest.raises(PosetError):
        p.codim("nope")
    with pytest.raises(PosetError):
        p.facets_containing("nope")


def test_linear_extension_square():
    p = square_poset()
    ext = p.linear_extension()
    assert ext == ["T", "E0", "E1", "E2", "E3", "V0", "V1", "V2", "V3"]


def test_linear_extension_chain():
    p = FacePoset(
        [("T", 0), ("E", 1), ("V", 2)], [("V", "E"), ("E", "T")], 2
    )
    assert p.linear_extension() == ["T", "E", "V"]


@pytest.mark.parametrize(
    "poset",
    [
        triangle_poset(),
        square_poset(),
        pentagon_poset(),
        simplex_poset(3),
        cube_poset(3),
        cube_poset(4),
        prism_poset(),
        product_poset(square_poset(), square_poset()),
        half_plane_poset(),
    ],
    ids=lambda p: repr(p),
)
def test_linear_extension_respects_comparability(poset):
    ext = poset.linear_extension()
    assert sorted(ext) == poset.ids()
    index = {f: i for i, f in enumerate(ext)}
    for f in poset.ids():
        for g in poset.ids():
            if poset.leq(f, g):
                # g contains f, so g must come first.
                assert index[g] <= index[f]


def test_upper_sets_and_leq():
    p = triangle_poset()
    assert p.leq("V0", "E0")
    assert p.leq("V0", "T")
    assert not p.leq("E0", "V0")
    assert not p.leq("E0", "E1")
    assert p.upper_set("T") == frozenset({"T"})


def test_boolean_intervals_have_power_set_size():
    for poset in (simplex_poset(4), cube_poset(4)):
        assert validate_poset(poset).valid
        for f in poset.ids():
            n = poset.codim(f)
            assert len(poset.upper_set(f)) == 2 ** n
            star = poset.facets_containing(f)
            subsets = {
                frozenset(poset.facets_containing(g)) for g in poset.upper_set(f)
            }
            expected = {
                frozenset(c)
                for size in range(n + 1)
                for c in itertools.combinations(star, size)
            }
            assert subsets == expected


def test_polygon_poset_sizes():
    for m in (2, 3, 4, 5, 6):
        p = polygon_poset(m)
        assert len(p) == 2 * m + 1
        assert validate_poset(p).valid
