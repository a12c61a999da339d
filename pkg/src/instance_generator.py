"""
Seeded Instance Generator
Random integer instances, in general position unless asked otherwise, plus JSON instance I/O.
"""

import json
import logging
import os
from typing import Iterator, List, Optional, Tuple

import numpy as np
from pydantic import ValidationError

from src import config
from src.errors import GenerationBudgetExceeded, InstanceFormatError, PreconditionError
from src.exact_geometry import Instance, in_interior
from src.models import InstanceFile
from src.position_analysis import is_general_position_set, is_general_position_z


# ========================================
# INSTANCE FILES
# ========================================

def load_instance(path: str) -> Instance:
    with open(path, 'rb') as fh:
        raw = fh.read()
    try:
        return InstanceFile.model_validate_json(raw).to_instance()
    except (ValidationError, UnicodeDecodeError) as e:
        raise InstanceFormatError(f"{path}: {e}") from e


def save_instance(inst: Instance, path: str):
    write_json(InstanceFile.from_instance(inst).model_dump(), path)


def write_json(payload, path: Optional[str]):
    """Write sorted-key JSON to path, or to stdout when path is None or '-'."""
    text = json.dumps(payload, indent=2, sort_keys=True)
    if path is None or path == '-':
        print(text)
        return
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as fh:
        fh.write(text + '\n')


# ========================================
# RANDOM GENERATION
# ========================================

def _draw(rng: np.random.Generator, d: int, n: int, bound: int, containing: bool):
    coords = rng.integers(-bound, bound + 1, size=(n, d))
    if containing:
        # start z near the centroid so containing draws are not rare in high d
        jitter = rng.integers(-1, 2, size=d)
        z = coords.sum(axis=0) // n + jitter
    else:
        z = rng.integers(-bound, bound + 1, size=d)
    points = [[int(c) for c in row] for row in coords]
    return points, [int(c) for c in z]


def generate(d: int, n: int, seed: int, coord_bound: Optional[int] = None,
             containing: bool = False, budget: Optional[int] = None,
             general_position: bool = True) -> Instance:
    """
    Deterministic instance from (d, n, seed, coord_bound, containing).

    Points are uniform integers in [-coord_bound, coord_bound]^d. Draws are
    rejected until z is not in S and, when `containing` is set, z lies
    strictly inside conv(S). With `general_position` (the default) S and z
    must also both be in general position; without it, small coordinate
    bounds give plenty of collinear and coplanar draws.
    """
    coord_bound = config.DEFAULT_COORD_BOUND if coord_bound is None else coord_bound
    budget = config.REJECTION_BUDGET if budget is None else budget
    if d < 1 or n < 1:
        raise PreconditionError(f"need d >= 1 and n >= 1, got d={d}, n={n}")
    if coord_bound < 1:
        raise PreconditionError(f"coordinate bound must be positive, got {coord_bound}")
    if containing and n < d + 1:
        raise PreconditionError(f"a z-containing set in R^{d} needs at least {d + 1} points")
    if coord_bound < n:
        logging.warning(f"coordinate bound {coord_bound} < n = {n}; expect many rejections")

    rng = np.random.default_rng(seed)
    for attempt in range(1, budget + 1):
        points, z = _draw(rng, d, n, coord_bound, containing)
        try:
            inst = Instance.from_coordinates(d, points, z)
        except InstanceFormatError:
            continue
        if general_position and not (is_general_position_set(inst) and is_general_position_z(inst)):
            continue
        if containing and not in_interior(list(inst.points), inst.z):
            continue
        logging.debug(f"seed {seed}: accepted after {attempt} draws")
        return inst
    raise GenerationBudgetExceeded(seed, budget)


def generate_corpus(count: int, max_d: int = 4, max_n: int = 12, base_seed: int = 0,
                    containing: Optional[bool] = None,
                    coord_bound: Optional[int] = None) -> Iterator[Tuple[int, Instance]]:
    """
    Yield (seed, instance) for seeds base_seed .. base_seed + count - 1.

    Dimension and size are drawn from the seed itself. With containing=None
    even seeds give z-containing instances and odd seeds free draws.
    """
    for seed in range(base_seed, base_seed + count):
        rng = np.random.default_rng(seed)
        d = int(rng.integers(1, max_d + 1))
        want = (seed % 2 == 0) if containing is None else containing
        low = d + 1 if want else 1
        n = int(rng.integers(low, max(low, max_n) + 1))
        yield seed, generate(d, n, seed, coord_bound, containing=want)


def corpus_file_names(seeds: List[int], prefix: str = 'instance') -> List[str]:
    return [f"{prefix}_{seed:05d}.json" for seed in seeds]
