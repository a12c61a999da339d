import pytest

from src.errors import DegenerateInputError, GeneralPositionError, PreconditionError
from src.exact_geometry import Hyperplane, Instance, Side, hyperplane_through, in_interior, make_point, side
from src.constructive_lemmas import (
    facet_certificate, find_containing_simplex, good_vertex, hull_facets, hull_vertices, is_maximal_avoiding,
    separating_hyperplane,
)
from src.family_enumeration import FamilyEnumerator
from src.instance_generator import generate


def pts(*coords):
    return [make_point(c) for c in coords]


# ========================================
# HULL
# ========================================

def test_hull_facets_of_triangle():
    facets = hull_facets(pts((0, 2), (-2, -1), (3, -1)))
    assert [f.vertices for f in facets] == [(0, 1), (0, 2), (1, 2)]


def test_hull_facets_of_square_with_interior_point():
    facets = hull_facets(pts((0, 0), (4, 0), (4, 4), (0, 4), (1, 2)))
    assert len(facets) == 4
    assert all(4 not in f.vertices for f in facets)
    assert hull_vertices(pts((0, 0), (4, 0), (4, 4), (0, 4), (1, 2))) == [0, 1, 2, 3]


def test_hull_facets_merge_collinear_points():
    facets = hull_facets(pts((0, 0), (2, 0), (4, 0), (2, 3)))
    assert [f.vertices for f in facets] == [(0, 1, 2), (0, 3), (2, 3)]


def test_hull_facets_need_full_dimension():
    with pytest.raises(DegenerateInputError):
        hull_facets(pts((0, 0), (1, 1), (2, 2)))


# ========================================
# RAY-SHOOTING SIMPLEX
# ========================================

def test_simplex_in_a_segment(segment):
    assert find_containing_simplex([0, 1], segment).vertices == [0, 1]


def test_simplex_in_a_triangle(triangle):
    cert = find_containing_simplex([0, 1, 2], triangle)
    assert cert.vertices == [0, 1, 2]
    assert cert.verified


def test_simplex_in_hand_checked_instance(hand_checked):
    cert = find_containing_simplex([0, 1, 2, 3], hand_checked)
    assert cert.vertices in ([0, 1, 2], [0, 1, 3])


def test_simplex_needs_z_inside(hand_checked):
    with pytest.raises(PreconditionError):
        find_containing_simplex([1, 2, 3], hand_checked)


@pytest.mark.parametrize("d,n,seed", [(2, 7, 1), (3, 7, 2), (3, 8, 3), (4, 8, 4)])
def test_simplex_is_a_minimal_containing_set(d, n, seed):
    inst = generate(d, n, seed, containing=True)
    cert = find_containing_simplex(list(range(n)), inst)
    assert cert.vertices in FamilyEnumerator(inst).minimal_containing()


# ========================================
# SEPARATION
# ========================================

def test_separation_of_triangle_edge(triangle):
    cert = separating_hyperplane([1, 2], triangle)
    H = cert.hyperplane.to_hyperplane()
    assert side(H, triangle.z) != Side.ON
    assert all(side(H, triangle.points[i]) != side(H, triangle.z) for i in [1, 2])


def test_separation_refuses_containing_sets(triangle):
    with pytest.raises(PreconditionError):
        separating_hyperplane([0, 1, 2], triangle)


def test_separation_of_full_dimensional_avoiding_set(hand_checked):
    cert = separating_hyperplane([1, 2, 3], hand_checked)
    assert cert.hyperplane.to_hyperplane() == hyperplane_through(hand_checked.select([1, 3]))
    assert cert.hyperplane.incident == [1, 3]


@pytest.mark.parametrize("seed", range(4))
def test_no_hyperplane_separates_two_maximal_avoiding_sets(seed):
    inst = generate(2 + seed % 2, 7, seed, containing=True)
    A = list(FamilyEnumerator(inst).maximal_avoiding())
    for member in A:
        separating_hyperplane(member, inst)
    for i, first in enumerate(A):
        for second in A[i + 1:]:
            assert in_interior(inst.select(sorted(set(first) | set(second))), inst.z)


# ========================================
# FACET CERTIFICATE
# ========================================

def test_facet_certificate_on_triangle(triangle):
    cert = facet_certificate([1, 2], 0, triangle)
    assert cert.T == [1, 2]
    assert cert.hyperplane.to_hyperplane() == Hyperplane(normal=(0, 1), offset=1)
    assert cert.hyperplane.incident == [1, 2]


def test_facet_certificate_on_hand_checked_instance(hand_checked):
    cert = facet_certificate([0, 1], 2, hand_checked)
    assert cert.T == [0, 1]
    assert cert.hyperplane.to_hyperplane() == hyperplane_through(hand_checked.select([0, 1]))


def test_facet_certificate_full_dimensional_set(hand_checked):
    cert = facet_certificate([1, 2, 3], 0, hand_checked)
    assert cert.T == [1, 3]


def test_facet_certificate_on_segment(segment):
    cert = facet_certificate([0], 1, segment)
    assert cert.T == [0]
    assert cert.hyperplane.to_hyperplane() == Hyperplane(normal=(1,), offset=2)


def test_facet_certificate_preconditions(hand_checked, avoiding_pair):
    with pytest.raises(PreconditionError):
        facet_certificate([0, 1], 0, hand_checked)
    with pytest.raises(PreconditionError):
        facet_certificate([0, 2], 1, hand_checked)
    with pytest.raises(PreconditionError):
        facet_certificate([0], 1, avoiding_pair)


@pytest.mark.parametrize("d,n,seed", [(2, 6, 11), (3, 6, 12), (3, 7, 13)])
def test_facet_certificates_are_essential(d, n, seed):
    inst = generate(d, n, seed, containing=True)
    enum = FamilyEnumerator(inst)
    essential = {e.hyperplane for e in enum.hyperplanes.essential}
    for A in enum.maximal_avoiding():
        assert is_maximal_avoiding(A, inst)
        for s in set(range(n)) - set(A):
            cert = facet_certificate(A, s, inst)
            assert set(cert.T) <= set(A)
            assert cert.hyperplane.to_hyperplane() in essential


# ========================================
# GOOD VERTEX
# ========================================

def test_good_vertex_with_interior_extra_point(hand_checked):
    cert = good_vertex(hand_checked)
    assert cert.case == 'simplex-interior'
    assert cert.u == 2
    assert cert.simplex == [0, 1, 2]
    assert cert.hyperplane.to_hyperplane() == hyperplane_through(hand_checked.select([0, 2]))


def test_good_vertex_when_hull_is_not_a_simplex():
    inst = Instance.from_coordinates(2, [[0, 4], [-4, -2], [5, -3], [6, 3], [1, 1]], [1, 0])
    cert = good_vertex(inst)
    assert cert.case == 'non-simplex'
    rest = [i for i in range(inst.n) if i != cert.u]
    assert in_interior(inst.select(rest), inst.z)
    H = cert.hyperplane.to_hyperplane()
    assert side(H, inst.points[cert.u]) == Side.ON
    assert sum(side(H, inst.points[i]) == Side.ON for i in cert.simplex) == inst.d


def test_good_vertex_when_extra_point_is_on_a_hull_edge():
    # (1/2, -5/2) lies on the edge between (-4, -2) and (5, -3)
    inst = Instance.from_coordinates(2, [[0, 4], [-4, -2], [5, -3], ["1/2", "-5/2"]], [1, 0])
    cert = good_vertex(inst)
    assert cert.case == 'simplex-boundary'
    assert cert.u == 3
    assert cert.simplex == [0, 1, 2]
    H = cert.hyperplane.to_hyperplane()
    assert H == hyperplane_through(inst.select([1, 2]))
    assert side(H, inst.points[3]) == Side.ON
    assert in_interior(inst.select([0, 1, 2]), inst.z)


def test_good_vertex_preconditions(triangle):
    with pytest.raises(PreconditionError):
        good_vertex(triangle)
    degenerate = Instance.from_coordinates(2, [[1, 1], [-1, -1], [2, -3], [-3, 2]], [0, 0])
    with pytest.raises(GeneralPositionError):
        good_vertex(degenerate)


@pytest.mark.parametrize("d,n,seed", [(1, 4, 21), (2, 5, 22), (2, 8, 23), (3, 6, 24), (3, 8, 25)])
def test_good_vertex_loses_fewer_avoiding_sets_than_it_could(d, n, seed):
    inst = generate(d, n, seed, containing=True)
    cert = good_vertex(inst)
    row = FamilyEnumerator(inst).point_counts(cert.u)
    assert row.a_lost < d * row.c
    assert row.h_essential < row.h
