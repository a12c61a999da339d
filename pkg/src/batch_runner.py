"""
Batch Runner
Verifies many instance files, in parallel when asked, and aggregates the
verdicts into one report. A bad file is recorded and skipped.
"""

import logging
import os
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from typing import Iterable, List, Optional

import pandas as pd
from pydantic import ValidationError

from src import config
from src.errors import CertificateError, ZeroHullError
from src.instance_generator import load_instance
from src.models import BatchEntry, BatchReport
from src.theorem_verifier import verify


def expand_inputs(inputs: Iterable[str]) -> List[str]:
    """Directories contribute their *.json files in name order; files pass through."""
    paths = []
    for item in inputs:
        if os.path.isdir(item):
            paths.extend(
                os.path.join(item, name) for name in sorted(os.listdir(item)) if name.endswith('.json')
            )
        else:
            paths.append(item)
    return paths


def verify_file(path: str, oracle_cap: Optional[int] = None, certificates: bool = False) -> BatchEntry:
    try:
        report = verify(load_instance(path), oracle_cap=oracle_cap, certificates=certificates)
        return BatchEntry(source=path, ok=True, report=report)
    except CertificateError:
        raise
    except (ZeroHullError, OSError, ValidationError) as e:
        logging.error(f"Skipping {path}: {e}")
        return BatchEntry(source=path, ok=False, error=f"{type(e).__name__}: {e}")


# ========================================
# AGGREGATION
# ========================================

def entry_frame(entries: List[BatchEntry]) -> pd.DataFrame:
    """One row per input file with position, containment and falsification flags."""
    rows = []
    for e in entries:
        row = {'source': e.source, 'ok': e.ok}
        if e.report is not None:
            r = e.report
            row.update({
                'd': r.instance.d,
                'n': len(r.instance.points),
                'z_general': r.position.z_in_general_position,
                'containing': r.counts.c > 0,
                'c': r.counts.c,
                'a': r.counts.a,
                'falsified': bool(r.falsifications),
            })
        rows.append(row)
    return pd.DataFrame(rows, columns=['source', 'ok', 'd', 'n', 'z_general', 'containing', 'c', 'a', 'falsified'])


def verdict_table(entries: List[BatchEntry]) -> pd.DataFrame:
    """Per-theorem counts of applicable, holding and violated instances."""
    rows = []
    for e in entries:
        if e.report is None:
            continue
        z_general = e.report.position.z_in_general_position
        for name, v in e.report.verdicts.items():
            counted = v.applicable and (z_general or not v.conditional_on_general_position)
            rows.append({
                'theorem': name,
                'applicable': counted,
                'holds': counted and v.holds,
                'violated': counted and not v.holds,
                'informational': v.applicable and not counted,
            })
    if not rows:
        return pd.DataFrame(columns=['applicable', 'holds', 'violated', 'informational'])
    return pd.DataFrame(rows).groupby('theorem', sort=True).sum().astype(int)


TALLY_FLAGS = ['z_general', 'containing', 'falsified']


def tally(entries: List[BatchEntry]) -> dict:
    counts = {'instances': len(entries), 'errors': 0, **{flag: 0 for flag in TALLY_FLAGS}}
    if not entries:
        return counts
    df = entry_frame(entries)
    ok = df['ok'].astype(bool)
    flags = df.loc[ok, TALLY_FLAGS].eq(True)
    counts['errors'] = int((~ok).sum())
    counts.update({flag: int(flags[flag].sum()) for flag in TALLY_FLAGS})
    return counts


# ========================================
# RUN
# ========================================

def batch(inputs: Iterable[str], jobs: Optional[int] = None, oracle_cap: Optional[int] = None,
          certificates: bool = False) -> BatchReport:
    """
    Verify every input and merge results in input order, so the report does
    not depend on the number of workers.
    """
    paths = expand_inputs(inputs)
    jobs = config.DEFAULT_JOBS if jobs is None else jobs
    worker = partial(verify_file, oracle_cap=oracle_cap, certificates=certificates)
    logging.info(f"verifying {len(paths)} instance files with {jobs} worker(s)")

    if jobs > 1 and len(paths) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            entries = list(executor.map(worker, paths))
    else:
        entries = [worker(p) for p in paths]

    report = BatchReport(entries=entries, tally=tally(entries))
    if report.falsified:
        logging.warning(f"{report.tally['falsified']} instance(s) falsified an applicable check")
    return report
