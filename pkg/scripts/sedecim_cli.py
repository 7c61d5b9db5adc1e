#!/usr/bin/env python3
import argparse
import asyncio
import os
import sys
import logging
from typing import List, Optional

sys.path.append(os.path.join(os.path.dirname(__file__), '..'))

from pydantic import ValidationError

from backend.arithmetic.ideals import find_generator
from backend.arithmetic.symbols import degree_one_primes, split_completely
from backend.config import build_run_config, generator_settings, load_settings, report_settings
from backend.errors import SedecimError
from backend.models import SUPPORTED_Q, Method, OutputFormat, RunConfig, SequenceValue
from backend.services.batch import collect
from backend.services.export import read_csv, write_csv, write_json
from backend.services.reports import density_report, render_decimal, verify
from backend.services.sixteen import a_ideal, e_p, unit_table_row

logger = logging.getLogger("sedecim")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_MISMATCH = 2


class CliParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_run_flags(parser: argparse.ArgumentParser):
    parser.add_argument('--q', help="one of 3, 7, 11, 19, 43, 67, 163 or ALL")
    parser.add_argument('--x-max', type=int, dest='x_max')
    parser.add_argument('--method', choices=[m.value for m in Method], type=str.upper)
    parser.add_argument('--oracle-cap', type=int, dest='oracle_cap')
    parser.add_argument('--jobs', type=int)
    parser.add_argument('--out')
    parser.add_argument('--format', choices=[f.value for f in OutputFormat], type=str.upper)


def build_parser() -> argparse.ArgumentParser:
    parser = CliParser(prog='sedecim', description="16-rank of Cl(Q(sqrt(-qp))) for q in {3,7,11,19,43,67,163}")
    parser.add_argument('-v', '--verbose', action='store_true')
    parser.add_argument('--config', help="YAML settings file (default sedecim.yaml)")
    sub = parser.add_subparsers(dest='command', required=True)

    density = sub.add_parser('density', help="run the criterion over p <= x_max and report densities")
    _add_run_flags(density)

    check = sub.add_parser('verify', help="compare e_p with class numbers")
    _add_run_flags(check)
    check.add_argument('--in', dest='infile', help="verify a CSV written by `density` instead of recomputing")

    sub.add_parser('tables', help="unit coefficient, orbit map and discriminant checks")

    sequence = sub.add_parser('sequence', help="evaluate the sequence at the degree-1 primes above p")
    sequence.add_argument('--q', type=int, required=True, choices=SUPPORTED_Q)
    sequence.add_argument('--p', type=int, nargs='+', required=True)
    return parser


def _run_config(args, settings, **forced) -> RunConfig:
    overrides = {
        'q': args.q,
        'x_max': args.x_max,
        'method': args.method,
        'oracle_cap': args.oracle_cap,
        'jobs': args.jobs,
        'out': args.out,
        'format': args.format,
    }
    overrides.update(forced)
    return build_run_config(overrides, settings)


def _open_out(path: Optional[str]):
    return open(path, 'w', encoding='utf-8', newline='') if path else sys.stdout


def cmd_density(args, settings) -> int:
    cfg = _run_config(args, settings)
    records = asyncio.run(collect(cfg))
    opts = report_settings(settings)
    reports = [density_report(records, q, cfg.x_max, **opts) for q in cfg.q_values]

    out = _open_out(cfg.out)
    try:
        if cfg.format == OutputFormat.CSV:
            write_csv(records, out)
        else:
            write_json(reports, out, records)
    finally:
        if out is not sys.stdout:
            out.close()

    logger.info(f"✅ {len(records)} records for q in {list(cfg.q_values)} written to {cfg.out or 'stdout'}")
    if cfg.method.uses_oracle:
        result = verify(records)
        if not result.ok:
            return EXIT_MISMATCH
    return EXIT_OK


def cmd_verify(args, settings) -> int:
    if args.infile:
        with open(args.infile, 'r', encoding='utf-8', newline='') as f:
            records = read_csv(f)
    else:
        cfg = _run_config(args, settings, method=Method.BOTH.value)
        records = asyncio.run(collect(cfg))
    result = verify(records)
    for record in result.mismatches:
        print(f"MISMATCH q={record.q} p={record.p} e={record.e} h={record.h}")
    print(f"checked={result.checked} skipped={result.skipped} mismatches={len(result.mismatches)}")
    return EXIT_OK if result.ok else EXIT_MISMATCH


def cmd_tables(args, settings) -> int:
    ok = True
    for q in SUPPORTED_Q:
        row = unit_table_row(q)
        x, y = row.eps_sigma_eps
        print(f"q={q:>3}  eps={row.eps}  eps*sigma(eps)={x}{y:+}*sqrt({q})")
        print(f"       2u(eps^4 w sigma(eps^4 w)) = {row.coeff_row[0]}u {row.coeff_row[1]:+}v  [{'ok' if row.coeff_ok else 'FAIL'}]")
        print(f"       orbit matrix mod 4 = {row.orbit_matrix}  [{'ok' if row.orbit_ok else 'FAIL'}]")
        print(f"       |disc| = 16q^2  [{'ok' if row.discriminant_ok else 'FAIL'}]")
        ok = ok and row.coeff_ok and row.orbit_ok and row.discriminant_ok
    return EXIT_OK if ok else EXIT_MISMATCH


def sequence_values(q: int, p: int, settings=None) -> List[SequenceValue]:
    search = generator_settings(settings)
    values = []
    for prime in degree_one_primes(q, p):
        w = find_generator(prime, **search)
        value = a_ideal(w)
        values.append(SequenceValue(
            q=q,
            p=p,
            generator=w.coords,
            value_re=render_decimal(value.re, 1),
            value_im=render_decimal(value.im, 1),
            e=e_p(q, p),
        ))
    return values


def cmd_sequence(args, settings) -> int:
    for p in args.p:
        if not split_completely(args.q, p):
            print(f"p={p}: does not split completely in M_{args.q}, skipped")
            continue
        for value in sequence_values(args.q, p, settings):
            print(f"q={value.q} p={value.p} w={value.generator} a=({value.value_re}, {value.value_im}) e_p={value.e}")
    return EXIT_OK


COMMANDS = {
    'density': cmd_density,
    'verify': cmd_verify,
    'tables': cmd_tables,
    'sequence': cmd_sequence,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO)
    settings = load_settings(args.config)
    try:
        return COMMANDS[args.command](args, settings)
    except SedecimError as e:
        logger.error(f"❌ {e}")
        return EXIT_MISMATCH
    except (ValidationError, ValueError) as e:
        logger.error(f"❌ {e}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
