"""
Position Analysis Module
Decides the two general-position hypotheses every fast path and theorem
check depends on, and returns the first violating subset as a witness.
"""

import logging
from functools import lru_cache
from itertools import combinations
from typing import Optional, Tuple

from src.exact_geometry import Instance, affine_rank
from src.models import PositionReport


def _z_on_span(inst: Instance, X: Tuple[int, ...]) -> bool:
    points = inst.select(X)
    return affine_rank(points + [inst.z]) == affine_rank(points)


@lru_cache(maxsize=1024)
def set_position_witness(inst: Instance) -> Optional[Tuple[int, ...]]:
    """
    First subset X with |X| <= d+1 that is affinely dependent, scanning
    sizes 2..d+1 in lexicographic order; None when S is in general position.
    """
    for k in range(2, min(inst.n, inst.d + 1) + 1):
        for X in combinations(range(inst.n), k):
            if affine_rank(inst.select(X)) < k - 1:
                return X
    return None


@lru_cache(maxsize=1024)
def z_position_witness(inst: Instance) -> Optional[Tuple[int, ...]]:
    """
    First affinely independent X with |X| <= d whose span contains z.

    Only independent sets need checking: if z lies on R(X) with dim R(X) < d,
    it lies on R(X') for an affine basis X' of X, which has at most d points.
    """
    for k in range(1, min(inst.n, inst.d) + 1):
        for X in combinations(range(inst.n), k):
            if affine_rank(inst.select(X)) != k - 1:
                continue
            if _z_on_span(inst, X):
                return X
    return None


def z_position_witness_by_definition(inst: Instance) -> Optional[Tuple[int, ...]]:
    """Exponential scan over every X with dim R(X) < d. Test oracle only."""
    for k in range(1, inst.n + 1):
        for X in combinations(range(inst.n), k):
            if affine_rank(inst.select(X)) < inst.d and _z_on_span(inst, X):
                return X
    return None


def is_general_position_set(inst: Instance) -> bool:
    return set_position_witness(inst) is None


def is_general_position_z(inst: Instance) -> bool:
    return z_position_witness(inst) is None


def analyze_position(inst: Instance) -> PositionReport:
    set_witness = set_position_witness(inst)
    z_witness = z_position_witness(inst)
    if z_witness is not None:
        logging.info(f"z is not in general position: z lies on R({list(z_witness)})")
    return PositionReport(
        set_in_general_position=set_witness is None,
        z_in_general_position=z_witness is None,
        set_witness=list(set_witness) if set_witness is not None else None,
        z_witness=list(z_witness) if z_witness is not None else None,
    )
