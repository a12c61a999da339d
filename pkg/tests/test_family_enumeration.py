import time

import pytest

from src.errors import GeneralPositionError, OracleCapExceeded
from src.exact_geometry import Hyperplane, Instance, hyperplane_through
from src.family_enumeration import (
    ContainmentTable, FamilyEnumerator, SubsetFamily, classify_essential, counts, facet_family,
    fast_maximal_avoiding, fast_minimal_containing, halfspace_cuts, hyperplane_family, indices_of, is_avoiding,
    mask_of, oracle_maximal_avoiding, oracle_minimal_containing, simplex_family, submasks,
)
from src.instance_generator import generate, generate_corpus


def test_masks():
    assert mask_of([0, 2, 5]) == 0b100101
    assert indices_of(0b100101) == (0, 2, 5)
    assert sorted(submasks(0b101)) == [0, 0b1, 0b100, 0b101]


def test_subset_family_is_sorted_and_deduplicated():
    fam = SubsetFamily.from_sets([[2, 1], [0, 3], (1, 2)])
    assert fam.as_lists() == [[0, 3], [1, 2]]
    assert [2, 1] in fam
    assert fam.containing(3).as_lists() == [[0, 3]]
    assert fam.is_antichain()
    assert not SubsetFamily.from_sets([[0], [0, 1]]).is_antichain()


def test_is_avoiding(triangle):
    assert is_avoiding([], triangle)
    assert is_avoiding([0, 1], triangle)
    assert not is_avoiding([0, 1, 2], triangle)


# ========================================
# HAND-CHECKED INSTANCE
# ========================================

def test_oracle_families_on_hand_checked_instance(hand_checked):
    C = oracle_minimal_containing(hand_checked)
    A = oracle_maximal_avoiding(hand_checked)
    assert C.as_lists() == [[0, 1, 2], [0, 1, 3]]
    assert A.as_lists() == [[0, 1], [0, 2, 3], [1, 2, 3]]


def test_fast_families_on_hand_checked_instance(hand_checked):
    assert fast_minimal_containing(hand_checked).as_lists() == [[0, 1, 2], [0, 1, 3]]
    assert fast_maximal_avoiding(hand_checked).as_lists() == [[0, 1], [0, 2, 3], [1, 2, 3]]


def test_facets_and_hyperplanes_on_hand_checked_instance(hand_checked):
    smpl = simplex_family(hand_checked)
    F = facet_family(hand_checked, smpl)
    assert len(smpl) == 2
    assert F.as_lists() == [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3]]
    H = classify_essential(hand_checked, hyperplane_family(hand_checked, F), oracle_maximal_avoiding(hand_checked))
    assert len(H) == 5
    essential = sorted(e.incident for e in H.essential)
    # the two hull edges through point 2 never separate a maximal avoiding set from z
    assert essential == [(0, 1), (0, 3), (1, 3)]


def test_counts_on_hand_checked_instance(hand_checked):
    report = counts(hand_checked)
    assert (report.c, report.a, report.smpl, report.conv) == (2, 3, 2, 2)
    assert (report.h, report.f, report.h_essential) == (5, 5, 3)
    rows = {r.index: r for r in report.per_point}
    assert [rows[s].c for s in range(4)] == [2, 2, 1, 1]
    assert [rows[s].a_lost for s in range(4)] == [2, 2, 0, 0]
    assert [rows[s].a_after_deletion for s in range(4)] == [1, 1, 3, 3]
    assert [rows[s].h_essential for s in range(4)] == [2, 2, 0, 2]


def test_per_point_frame(hand_checked):
    df = FamilyEnumerator(hand_checked).per_point_frame()
    assert list(df.index) == [0, 1, 2, 3]
    assert df.loc[2, 'h'] == 2
    assert (df['a_lost'] + df['a_survive'] == 3).all()


# ========================================
# SMALL CASES
# ========================================

def test_triangle_families(triangle):
    enum = FamilyEnumerator(triangle)
    assert enum.minimal_containing().as_lists() == [[0, 1, 2]]
    assert enum.maximal_avoiding().as_lists() == [[0, 1], [0, 2], [1, 2]]
    assert len(enum.simplices) == 1
    assert len(enum.facets) == 3
    assert len(enum.hyperplanes) == 3
    assert len(enum.hyperplanes.essential) == 3
    assert all(r.c == 1 and r.smpl == 1 for r in enum.counts().per_point)


def test_bottom_edge_hyperplane_is_found(triangle):
    planes = {e.hyperplane for e in FamilyEnumerator(triangle).hyperplanes}
    assert Hyperplane(normal=(0, 1), offset=1) in planes


def test_segment_families(segment):
    assert fast_maximal_avoiding(segment).as_lists() == [[0], [1]]
    assert oracle_maximal_avoiding(segment).as_lists() == [[0], [1]]
    assert fast_minimal_containing(segment).as_lists() == [[0, 1]]


def test_avoiding_set_is_its_own_maximal_avoiding_set(avoiding_pair):
    enum = FamilyEnumerator(avoiding_pair)
    assert enum.minimal_containing().as_lists() == []
    assert enum.maximal_avoiding().as_lists() == [[0, 1]]
    assert len(enum.hyperplanes) == 0
    assert oracle_maximal_avoiding(avoiding_pair).as_lists() == [[0, 1]]


def test_fast_path_refuses_z_off_general_position():
    inst = Instance.from_coordinates(2, [[1, 1], [-1, -1], [2, -3], [-3, 2]], [0, 0])
    with pytest.raises(GeneralPositionError):
        fast_maximal_avoiding(inst)
    with pytest.raises(GeneralPositionError):
        fast_minimal_containing(inst)
    enum = FamilyEnumerator(inst)
    assert enum.path == 'oracle'
    assert enum.minimal_containing().is_antichain()


def test_oracle_cap_is_enforced(hand_checked):
    with pytest.raises(OracleCapExceeded):
        oracle_minimal_containing(hand_checked, cap=3)
    degenerate = Instance.from_coordinates(2, [[1, 1], [-1, -1], [2, -3], [-3, 2]], [0, 0])
    with pytest.raises(OracleCapExceeded):
        FamilyEnumerator(degenerate, oracle_cap=3)


def test_containment_table_is_monotone(hand_checked):
    table = ContainmentTable(hand_checked)
    full = 0b1111
    for m in submasks(full):
        if table.containing(m):
            assert all(table.containing(m | (1 << i)) for i in range(4))
        else:
            assert all(not table.containing(m & ~(1 << i)) for i in indices_of(m))


# ========================================
# ORACLE EQUIVALENCE
# ========================================

def _assert_fast_matches_oracle(inst):
    table = ContainmentTable(inst)
    assert fast_minimal_containing(inst) == oracle_minimal_containing(inst, table=table)
    assert fast_maximal_avoiding(inst) == oracle_maximal_avoiding(inst, table=table)


@pytest.mark.parametrize("seed", range(12))
def test_fast_matches_oracle_small(seed):
    _, inst = next(generate_corpus(1, max_d=3, max_n=7, base_seed=seed))
    _assert_fast_matches_oracle(inst)


@pytest.mark.parametrize("d,n", [(1, 5), (2, 6), (3, 6), (4, 6)])
def test_fast_matches_oracle_containing(d, n):
    _assert_fast_matches_oracle(generate(d, n, seed=100 + d, containing=True))


@pytest.mark.slow
def test_fast_matches_oracle_corpus():
    for _, inst in generate_corpus(500, max_d=4, max_n=12):
        _assert_fast_matches_oracle(inst)


@pytest.mark.parametrize("seed", range(8))
def test_shared_cuts_serve_every_deletion_universe(seed):
    inst = generate(2 + seed % 3, 7, seed=200 + seed, containing=True)
    cuts = halfspace_cuts(inst)
    full = mask_of(range(inst.n))
    for s in range(inst.n):
        universe = full & ~(1 << s)
        assert fast_maximal_avoiding(inst, universe=universe, cuts=cuts) == \
            oracle_maximal_avoiding(inst, universe=universe)


@pytest.mark.parametrize("seed", range(6))
def test_families_are_antichains_and_survivors_match_deletion(seed):
    _, inst = next(generate_corpus(1, max_d=3, max_n=7, base_seed=40 + seed))
    enum = FamilyEnumerator(inst)
    assert enum.minimal_containing().is_antichain()
    assert enum.maximal_avoiding().is_antichain()
    report = enum.counts()
    for r in report.per_point:
        assert r.a_survive == r.a_after_deletion
        assert r.h <= r.f <= inst.d * r.smpl
    assert report.f <= (inst.d + 1) * report.smpl
    assert enum.simplices == enum.conv_family()


def test_every_hyperplane_bounds_a_simplex(hand_checked):
    enum = FamilyEnumerator(hand_checked)
    facet_planes = {hyperplane_through(hand_checked.select(T)) for T in enum.facets}
    assert {e.hyperplane for e in enum.hyperplanes} == facet_planes


@pytest.mark.slow
def test_corpus_counts_finish_in_time():
    start = time.perf_counter()
    for _, inst in generate_corpus(500, max_d=4, max_n=12):
        FamilyEnumerator(inst).counts()
    assert time.perf_counter() - start < 30
