"""
zerohull command line
check, enumerate, construct, gen, batch and oracle-compare subcommands.
"""

import argparse
import logging
import os
import sys
from typing import List, Optional

from pydantic import ValidationError

from src import config
from src.batch_runner import batch, verdict_table
from src.constructive_lemmas import facet_certificate, find_containing_simplex, good_vertex, separating_hyperplane
from src.errors import PreconditionError, ZeroHullError
from src.family_enumeration import FamilyEnumerator
from src.instance_generator import corpus_file_names, generate, load_instance, save_instance, write_json
from src.theorem_verifier import oracle_compare, verify

FAMILIES = ['C', 'A', 'Smpl', 'F', 'H']
OPERATIONS = ['simplex', 'facet-cert', 'good-vertex', 'separate']


class _Parser(argparse.ArgumentParser):
    """Usage errors exit 1; exit code 2 is reserved for falsifications."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(config.EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _index_list(text: str) -> List[int]:
    try:
        return sorted({int(tok) for tok in text.split(',') if tok.strip()})
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated indices, got {text!r}")


def _check_indices(indices, n):
    bad = [i for i in indices if not 0 <= i < n]
    if bad:
        raise PreconditionError(f"indices {bad} out of range for |S| = {n}")


def _announce(path: Optional[str], what: str):
    if path and path != '-':
        print(f"v {what}: {path}")


# ========================================
# SUBCOMMANDS
# ========================================

def cmd_check(args) -> int:
    report = verify(load_instance(args.file), oracle_cap=args.oracle_cap, certificates=args.certificates)
    write_json(report.model_dump(), args.output)
    _announce(args.output, "report")
    return config.EXIT_FALSIFIED if report.falsifications else config.EXIT_OK


def cmd_enumerate(args) -> int:
    enum = FamilyEnumerator(load_instance(args.file), oracle_cap=args.oracle_cap, force_oracle=args.oracle)
    families = enum.family_record().model_dump()
    if args.family:
        payload = families[args.family]
    else:
        payload = {'enumeration_path': enum.path, 'counts': enum.counts().model_dump(), 'families': families}
    write_json(payload, args.output)
    _announce(args.output, "families")
    return config.EXIT_OK


def cmd_construct(args) -> int:
    inst = load_instance(args.file)
    indices = args.set if args.set is not None else list(range(inst.n))
    _check_indices(indices, inst.n)
    if args.op == 'simplex':
        cert = find_containing_simplex(indices, inst)
    elif args.op == 'facet-cert':
        if args.set is None or args.s is None:
            raise PreconditionError("facet-cert needs --set (a maximal avoiding set) and --s")
        _check_indices([args.s], inst.n)
        cert = facet_certificate(indices, args.s, inst)
    elif args.op == 'separate':
        cert = separating_hyperplane(indices, inst)
    else:
        cert = good_vertex(inst)
    write_json(cert.model_dump(), args.output)
    _announce(args.output, args.op)
    return config.EXIT_OK


def cmd_gen(args) -> int:
    if args.count is None:
        inst = generate(args.d, args.n, args.seed, args.bound, containing=args.containing,
                        general_position=not args.any_position)
        save_instance(inst, args.output)
        _announce(args.output, "instance")
        return config.EXIT_OK
    seeds = list(range(args.seed, args.seed + args.count))
    for seed, name in zip(seeds, corpus_file_names(seeds)):
        inst = generate(args.d, args.n, seed, args.bound, containing=args.containing,
                        general_position=not args.any_position)
        save_instance(inst, os.path.join(args.output, name))
    print(f"v {args.count} instances: {args.output}")
    return config.EXIT_OK


def cmd_batch(args) -> int:
    report = batch(args.inputs, jobs=args.jobs, oracle_cap=args.oracle_cap, certificates=args.certificates)
    write_json(report.model_dump(), args.output)
    _announce(args.output, f"batch report ({report.tally['instances']} instances)")
    if args.table:
        print(verdict_table(report.entries).to_string(), file=sys.stderr)
    return config.EXIT_FALSIFIED if report.falsified else config.EXIT_OK


def cmd_oracle_compare(args) -> int:
    result = oracle_compare(load_instance(args.file), oracle_cap=args.oracle_cap)
    write_json(result.model_dump(), args.output)
    _announce(args.output, "comparison")
    return config.EXIT_OK if result.C_equal and result.A_equal else config.EXIT_FALSIFIED


# ========================================
# PARSER
# ========================================

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog='zerohull', description="Minimal z-containing and maximal z-avoiding subsets")
    parser.add_argument('--oracle-cap', type=int, default=None,
                        help=f"largest |S| the subset scan accepts (default {config.ORACLE_CAP})")
    parser.add_argument('-v', '--verbose', action='count', default=0, help="-v for info, -vv for debug")
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('check', help="position, counts, verdicts and structure checks")
    p.add_argument('file')
    p.add_argument('--certificates', action='store_true', help="also build and check every certificate")
    p.add_argument('-o', '--output', default=None)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser('enumerate', help="families C, A, Smpl, F and H")
    p.add_argument('file')
    p.add_argument('--oracle', action='store_true', help="force the subset-scan oracle")
    p.add_argument('--family', choices=FAMILIES)
    p.add_argument('-o', '--output', default=None)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser('construct', help="certificate constructions")
    p.add_argument('file')
    p.add_argument('--op', choices=OPERATIONS, required=True)
    p.add_argument('--set', type=_index_list, default=None, help="comma-separated point indices")
    p.add_argument('--s', type=int, default=None)
    p.add_argument('-o', '--output', default=None)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser('gen', help="seeded random instance")
    p.add_argument('--d', type=int, required=True)
    p.add_argument('--n', type=int, required=True)
    p.add_argument('--seed', type=int, required=True)
    p.add_argument('--containing', action='store_true')
    p.add_argument('--any-position', action='store_true', help="keep draws that are not in general position")
    p.add_argument('--bound', type=int, default=config.DEFAULT_COORD_BOUND)
    p.add_argument('--count', type=int, default=None, help="write COUNT instances into the -o directory")
    p.add_argument('-o', '--output', required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser('batch', help="verify many instance files")
    p.add_argument('inputs', nargs='*', help="instance files or directories of them")
    p.add_argument('--jobs', type=int, default=config.DEFAULT_JOBS)
    p.add_argument('--certificates', action='store_true')
    p.add_argument('--table', action='store_true', help="print per-theorem tallies to stderr")
    p.add_argument('-o', '--output', default=None)
    p.set_defaults(func=cmd_batch)

    p = sub.add_parser('oracle-compare', help="fast families against the subset-scan oracle")
    p.add_argument('file')
    p.add_argument('-o', '--output', default=None)
    p.set_defaults(func=cmd_oracle_compare)
    return parser


def _configure_logging(verbosity: int):
    if verbosity >= 2:
        level = logging.DEBUG
    elif verbosity == 1:
        level = logging.INFO
    else:
        level = getattr(logging, config.LOG_LEVEL.upper(), logging.WARNING)
    logging.basicConfig(level=level, format='%(levelname)s: %(message)s', stream=sys.stderr)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose)
    try:
        return args.func(args)
    except (ZeroHullError, OSError, ValidationError) as e:
        logging.error(f"{args.command} failed: {e}")
        return config.EXIT_ERROR


if __name__ == '__main__':
    sys.exit(main())
