"""
Theorem Verifier
Evaluates every counting theorem and structural lemma on one instance and
assembles the instance report.
"""

import logging
from itertools import combinations
from typing import Dict, Optional

from src.constructive_lemmas import (
    facet_certificate, find_containing_simplex, good_vertex, hull_facets, separating_hyperplane,
)
from src.errors import GeneralPositionError
from src.exact_geometry import Instance, affine_rank
from src.family_enumeration import (
    ContainmentTable, FamilyEnumerator, fast_maximal_avoiding, fast_minimal_containing, hull_vertex_set,
    oracle_maximal_avoiding, oracle_minimal_containing,
)
from src.models import (
    CountsReport, InstanceFile, InstanceReport, OracleComparison, TheoremVerdict, TheoremVerdicts,
)
from src.position_analysis import analyze_position, is_general_position_set, z_position_witness


# ========================================
# VERDICTS
# ========================================

def _verdict(applicable: bool, lhs: int, rhs: int, relation: str = '<=',
             conditional: bool = True) -> TheoremVerdict:
    holds = lhs <= rhs if relation == '<=' else lhs == rhs
    return TheoremVerdict(
        applicable=applicable, holds=holds, lhs=lhs, rhs=rhs, relation=relation,
        conditional_on_general_position=conditional,
    )


def theorem_verdicts(d: int, n: int, a: int, c: int, containing: bool) -> TheoremVerdicts:
    """
    Every bound and equality, evaluated from |A(S)| and |C(S)|.

    `applicable` carries the containment and size hypotheses; whether z in
    general position is also a hypothesis is carried by
    `conditional_on_general_position`.
    """
    return TheoremVerdicts(
        bg_question=_verdict(containing, a, 2 * d * c),
        main_bound=_verdict(True, a, d * c + 1),
        weak_bound=_verdict(containing, a, (d + 1) * c),
        simplex_equality=_verdict(not containing or n == d + 1, a, d * c + 1, '=='),
        d_plus_two_equality=_verdict(containing and n == d + 2, a, d * c - d + 1, '=='),
        large_set_bound=_verdict(containing and n >= d + 3, a, d * c - d),
        strengthened_bound=_verdict(containing and n >= d + 2, a, d * c - n + 3),
        # the planar result carries no general-position hypothesis
        plane_bound=_verdict(containing and d == 2, a, 3 * c + 1, conditional=False),
    )


def falsified(verdicts: TheoremVerdicts, z_general: bool):
    return [
        name for name, v in verdicts.items()
        if v.applicable and not v.holds and (z_general or not v.conditional_on_general_position)
    ]


# ========================================
# STRUCTURE CHECKS
# ========================================

def _observation_checks(enum: FamilyEnumerator, counts: CountsReport) -> Dict[str, bool]:
    d = enum.inst.d
    return {
        'antichain_C': enum.minimal_containing().is_antichain(),
        'antichain_A': enum.maximal_avoiding().is_antichain(),
        'conv_matches_C': counts.conv == counts.c and all(r.conv == r.c for r in counts.per_point),
        'facet_bound': counts.h <= counts.f <= (d + 1) * counts.smpl,
        'facet_bound_per_point': all(r.h <= r.f <= d * r.smpl for r in counts.per_point),
        'survivors_match_deletion': all(r.a_survive == r.a_after_deletion for r in counts.per_point),
    }


def _lemma_chain_holds(counts: CountsReport, d: int) -> bool:
    for r in counts.per_point:
        chain = (
            counts.a - r.a_after_deletion == r.a_lost
            and r.a_lost <= r.h_essential <= r.h <= r.f <= d * r.smpl
            and r.smpl == r.c
        )
        if not chain:
            logging.warning(f"counting chain breaks at point {r.index}: {r.model_dump()}")
            return False
    return True


def _d_plus_two_structure(enum: FamilyEnumerator) -> bool:
    """C(S) = {S - s, S - s'} and A(S) = {S - x : x in F} + {F} with F = S - {s, s'}."""
    everything = frozenset(range(enum.inst.n))
    C = [frozenset(X) for X in enum.minimal_containing()]
    if len(C) != 2:
        return False
    dropped = [everything - X for X in C]
    if any(len(x) != 1 for x in dropped):
        return False
    F = everything - dropped[0] - dropped[1]
    expected = {everything - {x} for x in F} | {F}
    return {frozenset(A) for A in enum.maximal_avoiding()} == expected


def _deletion_induction(enum: FamilyEnumerator, counts: CountsReport) -> bool:
    """
    Deleting any point loses at most d|C_s| avoiding sets, strictly fewer at a
    good vertex. The good vertex also has a non-essential hyperplane only when
    S is in general position: otherwise S on the hull facet through u can itself
    be a maximal avoiding set.
    """
    d = enum.inst.d
    if not all(counts.a - r.a_after_deletion <= d * r.c for r in counts.per_point):
        return False
    cert = good_vertex(enum.inst)
    r = counts.per_point[cert.u]
    if r.a_lost >= d * r.c:
        return False
    return r.h_essential < r.h or not is_general_position_set(enum.inst)


def _certificate_checks(enum: FamilyEnumerator) -> Dict[str, bool]:
    inst = enum.inst
    C = enum.minimal_containing()
    A = enum.maximal_avoiding()
    vertices = hull_vertex_set(tuple(range(inst.n)), inst)
    simplex = find_containing_simplex(vertices, inst)

    essential = {e.hyperplane for e in enum.hyperplanes.essential}
    facet_ok = True
    for member in A:
        pts = inst.select(member)
        facets = hull_facets(pts) if affine_rank(pts) == inst.d else None
        for s in range(inst.n):
            if s in member:
                continue
            cert = facet_certificate(member, s, inst, checked=True, facets=facets)
            if cert.hyperplane.to_hyperplane() not in essential:
                logging.warning(f"facet certificate for A={list(member)}, s={s} is not essential")
                facet_ok = False

    for member in A:
        separating_hyperplane(member, inst)
    unions = all(
        enum.table.containing(m1 | m2) for m1, m2 in combinations(A.masks, 2)
    )
    return {
        'simplex_certificate': tuple(simplex.vertices) in C,
        'facet_certificates': facet_ok,
        'separation': unions,
    }


def structure_checks(enum: FamilyEnumerator, counts: CountsReport, containing: bool,
                     certificates: bool = False) -> Dict[str, bool]:
    checks = _observation_checks(enum, counts)
    if not enum.z_general:
        return checks
    d, n = enum.inst.d, enum.inst.n
    checks['smpl_equals_conv'] = enum.simplices == enum.conv_family()
    if containing:
        checks['lemma_chain'] = _lemma_chain_holds(counts, d)
        if n == d + 2:
            checks['d_plus_two_structure'] = _d_plus_two_structure(enum)
        if n >= d + 2:
            checks['deletion_induction'] = _deletion_induction(enum, counts)
        if certificates:
            checks.update(_certificate_checks(enum))
    return checks


# ========================================
# REPORTS
# ========================================

def verify(inst: Instance, oracle_cap: Optional[int] = None, force_oracle: bool = False,
           certificates: bool = False) -> InstanceReport:
    """
    Full report for one instance: position, families, counts, verdicts and
    structure checks. Failures on z-general-position instances are listed
    as falsifications; elsewhere verdicts are informational.
    """
    position = analyze_position(inst)
    enum = FamilyEnumerator(inst, oracle_cap, force_oracle)
    counts = enum.counts()
    containing = enum.table.containing(enum.full)

    verdicts = theorem_verdicts(inst.d, inst.n, counts.a, counts.c, containing)
    checks = structure_checks(enum, counts, containing, certificates)
    failures = falsified(verdicts, position.z_in_general_position)
    failures += [f"structure:{name}" for name, ok in checks.items() if not ok]
    for name in failures:
        logging.warning(f"FALSIFICATION {name}: |A|={counts.a}, |C|={counts.c}, d={inst.d}, n={inst.n}")

    return InstanceReport(
        instance=InstanceFile.from_instance(inst),
        position=position,
        counts=counts,
        families=enum.family_record(),
        verdicts=verdicts,
        enumeration_path=enum.path,
        structure_checks=checks,
        falsifications=failures,
    )


def oracle_compare(inst: Instance, oracle_cap: Optional[int] = None) -> OracleComparison:
    """Both families by both paths. The fast path needs z in general position."""
    witness = z_position_witness(inst)
    if witness is not None:
        raise GeneralPositionError(f"z lies on R({list(witness)}); no fast path to compare", witness=witness)
    table = ContainmentTable(inst)
    fast_C = fast_minimal_containing(inst, checked=True)
    fast_A = fast_maximal_avoiding(inst, checked=True)
    oracle_C = oracle_minimal_containing(inst, oracle_cap, table=table)
    oracle_A = oracle_maximal_avoiding(inst, oracle_cap, table=table)
    return OracleComparison(
        fast_C=fast_C.as_lists(), oracle_C=oracle_C.as_lists(),
        fast_A=fast_A.as_lists(), oracle_A=oracle_A.as_lists(),
        C_equal=fast_C == oracle_C, A_equal=fast_A == oracle_A,
    )
