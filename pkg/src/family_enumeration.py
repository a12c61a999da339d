"""
Family Enumeration Module
C(S), A(S), Smpl(S), F(S), H(S), their per-point variants and essential
hyperplanes, by an exponential subset-scan oracle and by fast candidate
generation under general position.
"""

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import pandas as pd

from src import config
from src.constructive_lemmas import hull_vertices
from src.errors import DegenerateInputError, GeneralPositionError, OracleCapExceeded
from src.exact_geometry import (
    Hyperplane, Instance, Side, affine_rank, hyperplane_through, in_interior, side,
    simplex_contains_interior,
)
from src.models import CountsReport, FamilyRecord, HyperplaneRecord, PointCounts
from src.position_analysis import z_position_witness


# ========================================
# SUBSET MASKS
# ========================================

def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def indices_of(mask: int) -> Tuple[int, ...]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def submasks(universe: int):
    """Every submask of universe, the empty set included."""
    sub = universe
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & universe


@dataclass(frozen=True)
class SubsetFamily:
    """Sorted index tuples, deduplicated and in lexicographic order."""
    members: Tuple[Tuple[int, ...], ...] = ()

    @classmethod
    def from_masks(cls, masks: Iterable[int]) -> 'SubsetFamily':
        return cls(tuple(sorted({indices_of(m) for m in masks})))

    @classmethod
    def from_sets(cls, sets: Iterable[Iterable[int]]) -> 'SubsetFamily':
        return cls(tuple(sorted({tuple(sorted(s)) for s in sets})))

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, item):
        return tuple(sorted(item)) in self.members

    @property
    def masks(self) -> List[int]:
        return [mask_of(m) for m in self.members]

    def containing(self, s: int) -> 'SubsetFamily':
        return SubsetFamily(tuple(m for m in self.members if s in m))

    def is_antichain(self) -> bool:
        masks = self.masks
        return not any(a != b and a & b == a for a in masks for b in masks)

    def as_lists(self) -> List[List[int]]:
        return [list(m) for m in self.members]


@dataclass(frozen=True)
class HyperplaneEntry:
    hyperplane: Hyperplane
    incident: Tuple[int, ...]
    essential: bool = False


@dataclass(frozen=True)
class HyperplaneFamily:
    members: Tuple[HyperplaneEntry, ...] = ()

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def containing(self, s: int) -> List[HyperplaneEntry]:
        return [e for e in self.members if s in e.incident]

    @property
    def essential(self) -> List[HyperplaneEntry]:
        return [e for e in self.members if e.essential]


# ========================================
# PREDICATES ON SUBSETS
# ========================================

def is_avoiding(X: Sequence[int], inst: Instance) -> bool:
    """z is not in the interior of conv(X); the empty set avoids."""
    if not X:
        return True
    return not in_interior(inst.select(X), inst.z)


def _check_mask_limit(inst: Instance):
    if inst.n > config.MASK_LIMIT:
        raise DegenerateInputError(f"|S| = {inst.n} exceeds the {config.MASK_LIMIT}-point mask limit")


class ContainmentTable:
    """Memoized z-containing status of subsets of one instance."""

    def __init__(self, inst: Instance):
        _check_mask_limit(inst)
        self.inst = inst
        self._cache: Dict[int, bool] = {}

    def containing(self, mask: int) -> bool:
        hit = self._cache.get(mask)
        if hit is None:
            idx = indices_of(mask)
            hit = len(idx) > self.inst.d and not is_avoiding(idx, self.inst)
            self._cache[mask] = hit
        return hit

    def __len__(self):
        return len(self._cache)


def _universe(inst: Instance, universe: Optional[int]) -> int:
    return (1 << inst.n) - 1 if universe is None else universe


def _require_cap(universe: int, cap: Optional[int]):
    cap = config.ORACLE_CAP if cap is None else cap
    size = bin(universe).count('1')
    if size > cap:
        raise OracleCapExceeded(size, cap)


def _require_z_general_position(inst: Instance):
    witness = z_position_witness(inst)
    if witness is not None:
        raise GeneralPositionError(
            f"z lies on R({list(witness)}); fast enumeration needs z in general position, "
            f"use the oracle path instead",
            witness=witness,
        )


# ========================================
# ORACLE ENUMERATION
# ========================================

def oracle_minimal_containing(inst: Instance, cap: Optional[int] = None, universe: Optional[int] = None,
                              table: Optional[ContainmentTable] = None) -> SubsetFamily:
    """
    Exact C(S) by scanning every subset. Containment is upward closed, so a
    containing set is minimal iff none of its one-point deletions contains.
    """
    universe = _universe(inst, universe)
    _require_cap(universe, cap)
    table = table if table is not None else ContainmentTable(inst)
    found = []
    for m in submasks(universe):
        if not table.containing(m):
            continue
        if all(not table.containing(m & ~(1 << i)) for i in indices_of(m)):
            found.append(m)
    return SubsetFamily.from_masks(found)


def oracle_maximal_avoiding(inst: Instance, cap: Optional[int] = None, universe: Optional[int] = None,
                            table: Optional[ContainmentTable] = None) -> SubsetFamily:
    """Exact A(S): avoiding X such that X + s contains for every s outside X."""
    universe = _universe(inst, universe)
    _require_cap(universe, cap)
    table = table if table is not None else ContainmentTable(inst)
    found = []
    for m in submasks(universe):
        if table.containing(m):
            continue
        outside = indices_of(universe & ~m)
        if all(table.containing(m | (1 << s)) for s in outside):
            found.append(m)
    return SubsetFamily.from_masks(found)


# ========================================
# FAST ENUMERATION
# ========================================

def fast_minimal_containing(inst: Instance, universe: Optional[int] = None,
                            checked: bool = False) -> SubsetFamily:
    """
    Under z general position every minimal containing set is a simplex,
    so C(S) is exactly the set of (d+1)-subsets with z strictly inside.
    """
    if not checked:
        _require_z_general_position(inst)
    return simplex_family(inst, universe)


@dataclass(frozen=True)
class HalfspaceCut:
    """R(Y + z) for |Y| = d-1, with the points on each of its closed sides."""
    support: int
    upper: int
    lower: int


def halfspace_cuts(inst: Instance) -> List[HalfspaceCut]:
    """Every hyperplane through z and d-1 points of S, with side masks over all of S."""
    d = inst.d
    cuts = []
    for Y in combinations(range(inst.n), d - 1):
        if Y and affine_rank(inst.select(Y)) != d - 2:
            continue
        try:
            H = hyperplane_through(inst.select(Y) + [inst.z])
        except DegenerateInputError:
            continue
        sides = [side(H, p) for p in inst.points]
        cuts.append(HalfspaceCut(
            support=mask_of(Y),
            upper=mask_of(i for i, s in enumerate(sides) if s != Side.NEGATIVE),
            lower=mask_of(i for i, s in enumerate(sides) if s != Side.POSITIVE),
        ))
    return cuts


def fast_maximal_avoiding(inst: Instance, universe: Optional[int] = None, checked: bool = False,
                          cuts: Optional[List[HalfspaceCut]] = None) -> SubsetFamily:
    """
    A(S) from hyperplanes through z.

    Every maximal avoiding set is cut off by a hyperplane through z; rotating
    it about z keeps A on its closed side until it rests on d-1 points of S.
    So the closed sides of the hyperplanes R(Y + z), |Y| = d-1, over-generate
    A(S). Each side is avoiding since z is on its boundary, so A(S) is the set
    of maximal sides. Cuts computed on S serve every universe inside S.
    """
    if not checked:
        _require_z_general_position(inst)
    universe = _universe(inst, universe)
    if is_avoiding(indices_of(universe), inst):
        return SubsetFamily.from_masks([universe])

    cuts = halfspace_cuts(inst) if cuts is None else cuts
    candidates = set()
    for cut in cuts:
        if cut.support & ~universe:
            continue
        candidates.add(cut.upper & universe)
        candidates.add(cut.lower & universe)

    # larger sets first, so a kept set is never a subset of a later one
    maximal = []
    for c in sorted(candidates, key=lambda m: -bin(m).count('1')):
        if not any(c & o == c for o in maximal):
            maximal.append(c)
    logging.debug(f"fast A(S): {len(candidates)} candidates, {len(maximal)} maximal")
    return SubsetFamily.from_masks(maximal)


# ========================================
# SIMPLICES, FACETS, HYPERPLANES
# ========================================

def simplex_family(inst: Instance, universe: Optional[int] = None) -> SubsetFamily:
    """Smpl(S): (d+1)-subsets spanning a d-simplex with z strictly inside."""
    idx = indices_of(_universe(inst, universe))
    return SubsetFamily.from_sets(
        T for T in combinations(idx, inst.d + 1) if simplex_contains_interior(inst.select(T), inst.z)
    )


def facet_family(inst: Instance, smpl: Optional[SubsetFamily] = None) -> SubsetFamily:
    """F(S): the d-point facets of members of Smpl(S)."""
    smpl = simplex_family(inst) if smpl is None else smpl
    return SubsetFamily.from_sets(T for C in smpl for T in combinations(C, inst.d))


def hyperplane_family(inst: Instance, facets: Optional[SubsetFamily] = None,
                      universe: Optional[int] = None) -> HyperplaneFamily:
    """H(S): deduplicated canonical R(T) for T in F(S), with incident points."""
    facets = facet_family(inst) if facets is None else facets
    idx = indices_of(_universe(inst, universe))
    seen = {}
    for T in facets:
        H = hyperplane_through(inst.select(T))
        if H not in seen:
            seen[H] = tuple(i for i in idx if side(H, inst.points[i]) == Side.ON)
    ordered = sorted(seen.items(), key=lambda kv: (kv[1], kv[0].normal, kv[0].offset))
    return HyperplaneFamily(tuple(HyperplaneEntry(H, incident) for H, incident in ordered))


def classify_essential(inst: Instance, hyperplanes: HyperplaneFamily,
                       avoiding: SubsetFamily) -> HyperplaneFamily:
    """
    Flag H as essential when some A in A(S) has d affinely independent points
    on H, none on the side of z, and z off H.
    """
    spans = {}

    def spans_hyperplane(mask: int) -> bool:
        if mask not in spans:
            spans[mask] = affine_rank(inst.select(indices_of(mask))) == inst.d - 1
        return spans[mask]

    entries = []
    for e in hyperplanes:
        z_side = side(e.hyperplane, inst.z)
        on = mask_of(e.incident)
        wrong = mask_of(i for i, p in enumerate(inst.points) if side(e.hyperplane, p) == z_side)
        essential = z_side != Side.ON and any(
            not A & wrong and bin(A & on).count('1') >= inst.d and spans_hyperplane(A & on)
            for A in avoiding.masks
        )
        entries.append(HyperplaneEntry(e.hyperplane, e.incident, essential))
    return HyperplaneFamily(tuple(entries))


def hull_vertex_set(X: Sequence[int], inst: Instance) -> Tuple[int, ...]:
    """Indices of X that are vertices of conv(X)."""
    return tuple(X[k] for k in hull_vertices(inst.select(X)))


# ========================================
# ENUMERATOR
# ========================================

class FamilyEnumerator:
    """
    Computes and caches every family and count for one instance.
    The fast path is used when z is in general position w.r.t. S, the
    oracle otherwise (or when force_oracle is set).
    """

    def __init__(self, inst: Instance, oracle_cap: Optional[int] = None, force_oracle: bool = False):
        _check_mask_limit(inst)
        self.inst = inst
        self.oracle_cap = config.ORACLE_CAP if oracle_cap is None else oracle_cap
        self.z_general = z_position_witness(inst) is None
        self.use_fast = self.z_general and not force_oracle
        self.table = ContainmentTable(inst)
        self.full = (1 << inst.n) - 1
        self._avoiding: Dict[int, SubsetFamily] = {}
        self._containing: Dict[int, SubsetFamily] = {}
        self._smpl = None
        self._facets = None
        self._hyperplanes = None
        self._conv = None
        self._counts = None
        self._cuts = None
        if not self.use_fast:
            _require_cap(self.full, self.oracle_cap)
        logging.debug(f"enumerating n={inst.n} d={inst.d} via {self.path} path")

    @property
    def path(self) -> str:
        return 'fast' if self.use_fast else 'oracle'

    def minimal_containing(self, universe: Optional[int] = None) -> SubsetFamily:
        universe = self.full if universe is None else universe
        if universe not in self._containing:
            if self.use_fast:
                fam = fast_minimal_containing(self.inst, universe, checked=True)
            else:
                fam = oracle_minimal_containing(self.inst, self.oracle_cap, universe, self.table)
            self._containing[universe] = fam
        return self._containing[universe]

    def maximal_avoiding(self, universe: Optional[int] = None) -> SubsetFamily:
        universe = self.full if universe is None else universe
        if universe not in self._avoiding:
            if self.use_fast:
                if self._cuts is None:
                    self._cuts = halfspace_cuts(self.inst)
                fam = fast_maximal_avoiding(self.inst, universe, checked=True, cuts=self._cuts)
            else:
                fam = oracle_maximal_avoiding(self.inst, self.oracle_cap, universe, self.table)
            self._avoiding[universe] = fam
        return self._avoiding[universe]

    def without(self, s: int) -> int:
        return self.full & ~(1 << s)

    @property
    def simplices(self) -> SubsetFamily:
        if self._smpl is None:
            self._smpl = simplex_family(self.inst)
        return self._smpl

    @property
    def facets(self) -> SubsetFamily:
        if self._facets is None:
            self._facets = facet_family(self.inst, self.simplices)
        return self._facets

    @property
    def hyperplanes(self) -> HyperplaneFamily:
        if self._hyperplanes is None:
            raw = hyperplane_family(self.inst, self.facets)
            self._hyperplanes = classify_essential(self.inst, raw, self.maximal_avoiding())
        return self._hyperplanes

    def conv_family(self) -> SubsetFamily:
        """Conv(S) as vertex sets of conv(X), X in C(S)."""
        if self._conv is None:
            self._conv = SubsetFamily.from_sets(hull_vertex_set(X, self.inst) for X in self.minimal_containing())
        return self._conv

    def surviving(self, s: int) -> SubsetFamily:
        """A^s(S): members whose restriction to S \\ s is maximal avoiding in S \\ s."""
        after = set(self.maximal_avoiding(self.without(s)).masks)
        return SubsetFamily.from_masks(m for m in self.maximal_avoiding().masks if m & ~(1 << s) in after)

    def lost(self, s: int) -> SubsetFamily:
        """A_s(S) = A(S) minus A^s(S)."""
        keep = set(self.surviving(s).masks)
        return SubsetFamily.from_masks(m for m in self.maximal_avoiding().masks if m not in keep)

    def point_counts(self, s: int) -> PointCounts:
        conv = self.conv_family()
        hyperplanes = self.hyperplanes.containing(s)
        return PointCounts(
            index=s,
            c=len(self.minimal_containing().containing(s)),
            conv=len(conv.containing(s)),
            smpl=len(self.simplices.containing(s)),
            a_lost=len(self.lost(s)),
            a_survive=len(self.surviving(s)),
            a_after_deletion=len(self.maximal_avoiding(self.without(s))),
            h=len(hyperplanes),
            f=len(self.facets.containing(s)),
            h_essential=sum(1 for e in hyperplanes if e.essential),
        )

    def counts(self) -> CountsReport:
        if self._counts is None:
            self._counts = self._build_counts()
        return self._counts

    def _build_counts(self) -> CountsReport:
        return CountsReport(
            c=len(self.minimal_containing()),
            a=len(self.maximal_avoiding()),
            smpl=len(self.simplices),
            conv=len(self.conv_family()),
            h=len(self.hyperplanes),
            f=len(self.facets),
            h_essential=len(self.hyperplanes.essential),
            per_point=[self.point_counts(s) for s in range(self.inst.n)],
        )

    def per_point_frame(self) -> pd.DataFrame:
        rows = [pc.model_dump() for pc in self.counts().per_point]
        return pd.DataFrame(rows).set_index('index')

    def family_record(self) -> FamilyRecord:
        return FamilyRecord(
            C=self.minimal_containing().as_lists(),
            A=self.maximal_avoiding().as_lists(),
            Smpl=self.simplices.as_lists(),
            F=self.facets.as_lists(),
            H=[
                HyperplaneRecord.from_hyperplane(e.hyperplane, essential=e.essential, incident=list(e.incident))
                for e in self.hyperplanes
            ],
        )


def counts(inst: Instance, oracle_cap: Optional[int] = None) -> CountsReport:
    return FamilyEnumerator(inst, oracle_cap).counts()
