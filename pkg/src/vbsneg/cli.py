"""Command-line front end.

Subcommands: ``symbols``, ``spectrum``, ``negativity``, ``conjecture``,
``figure`` and ``oracle``.  Results go to stdout (or ``--out``) as JSON or CSV.

Exit codes: 0 success, 1 usage error, 2 numerical-contract violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys

import numpy as np

from .linalg import NumericalContractError
from .negativity import (adjacent_negativity, conjecture_scan, figure_data, figure_plateau,
                         numeric_negativity)
from .numbers import HalfInt, NotClosedError
from .oracle import DEFAULT_CAP, OracleTooLarge, compare, oracle_spectra
from .reduced import diagonalize, rho_sectors, thermodynamic_eigenvalues
from .su2 import clebsch_gordan, f_matrix, six_j
from .vbs import Boundary, ChainSpec, lambda_spectrum, spin_value, transfer_matrix

__all__ = ["run", "main", "build_parser", "UsageError"]

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        # let "-1/2" through as a value, like argparse already does for "-1"
        self._negative_number_matcher = re.compile(r"^-\d+(/\d+)?$|^-\d*\.\d+$")

    def error(self, message):
        raise UsageError(message)


def _halfint(text: str) -> HalfInt:
    try:
        return HalfInt.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _spin(text: str) -> int:
    try:
        return spin_value(HalfInt.parse(text))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _length(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer length: {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"length must be non-negative: {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--out", help="write output to this file instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), help="output format")
    common.add_argument("--precision", type=int, default=17,
                        help="significant digits for CSV numbers (default 17)")

    parser = _Parser(prog="vbsneg", description="Two-block entanglement of the spin-S VBS chain.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("symbols", parents=[common], help="exact CG, 6j and F symbols")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--cg", nargs=6, type=_halfint, metavar=("j1", "m1", "j2", "m2", "J", "M"))
    g.add_argument("--sixj", nargs=6, type=_halfint, metavar=("j1", "j2", "j3", "j4", "j5", "j6"))
    g.add_argument("--fmat", nargs=6, type=_halfint, metavar=("J1", "J2", "J3", "J4", "N", "J"))

    p = sub.add_parser("spectrum", parents=[common], help="transfer or reduced-density spectra")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--transfer", type=_spin, metavar="S")
    g.add_argument("--rho", nargs=6, metavar=("S", "L1", "LA", "L2", "LB", "L3"))
    p.add_argument("--boundary", choices=("pbc", "edges", "thermo"))
    p.add_argument("--ptdm", action="store_true", help="spectrum of the partial transpose on A")
    p.add_argument("--csv", action="store_true", help="flatten sectors to CSV")

    p = sub.add_parser("negativity", parents=[common], help="negativity of blocks A and B")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--adjacent", nargs=3, metavar=("S", "LA", "LB"))
    g.add_argument("--general", nargs=6, metavar=("S", "L1", "LA", "L2", "LB", "L3"))
    p.add_argument("--boundary", choices=("pbc", "edges"))

    p = sub.add_parser("conjecture", parents=[common], help="scan separated blocks")
    p.add_argument("--smax", type=_spin, required=True)
    p.add_argument("--budget", type=_length, required=True)
    p.add_argument("--summary", action="store_true", help="omit the per-configuration rows")

    p = sub.add_parser("figure", parents=[common], help="negativity against LA at fixed LB")
    p.add_argument("--lb", type=_length, default=2)
    p.add_argument("--smax", type=_spin, default=4)
    p.add_argument("--lamax", type=_length, default=40)
    p.add_argument("--csv", nargs="?", const="-", metavar="PATH",
                   help="write CSV (to PATH, or stdout when no path is given)")

    p = sub.add_parser("oracle", parents=[common], help="compare with the dense reference")
    p.add_argument("--compare", nargs=6, required=True, metavar=("S", "L1", "LA", "L2", "LB", "L3"))
    p.add_argument("--boundary", choices=("pbc", "edges"))
    p.add_argument("--cap", type=int, default=DEFAULT_CAP, help="amplitude cap for dense arrays")
    return parser


# -- helpers -------------------------------------------------------------------------

def _parse_chain(values, boundary: str) -> ChainSpec:
    try:
        S = _spin(values[0])
        lengths = [_length(v) for v in values[1:]]
    except argparse.ArgumentTypeError as exc:
        raise UsageError(str(exc)) from None
    try:
        return ChainSpec(S, *lengths, boundary=Boundary(boundary))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _num(x):
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    return x


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    return _num(obj)


def _dump_json(payload) -> str:
    return json.dumps(_jsonable(payload), indent=2) + "\n"


def _dump_csv(header, rows, precision: int) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([format(v, f".{precision}g") if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _spectrum_payload(spectrum) -> dict:
    return {
        "source": spectrum.source,
        "dimension": spectrum.dimension,
        "trace": spectrum.trace,
        "min_eigenvalue": spectrum.min_eigenvalue,
        "negative_sum": spectrum.negative_sum,
        "sectors": [{"R": s.R, "labels": [list(l) for l in s.labels],
                     "eigenvalues": s.eigenvalues, "degeneracy": s.degeneracy}
                    for s in spectrum.sectors],
    }


def _spectrum_rows(spectrum):
    for s in spectrum.sectors:
        for i, v in enumerate(s.eigenvalues):
            yield [s.R, s.degeneracy, i, float(v)]


# -- subcommands ---------------------------------------------------------------------

def _cmd_symbols(args):
    if args.cg:
        kind, value = "clebsch_gordan", clebsch_gordan(*args.cg)
        labels = args.cg
    elif args.sixj:
        kind, value = "six_j", six_j(*args.sixj)
        labels = args.sixj
    else:
        kind, value = "f_matrix", f_matrix(*args.fmat)
        labels = args.fmat
    payload = {"symbol": kind, "labels": [str(x) for x in labels], **value.as_dict()}
    header = ["symbol", "labels", "sign", "numerator", "denominator", "float"]
    row = [kind, " ".join(payload["labels"]), value.sign, value.numerator,
           value.denominator, float(value)]
    return payload, (header, [row])


def _cmd_spectrum(args):
    if args.transfer is not None:
        if args.boundary or args.ptdm:
            raise UsageError("--boundary and --ptdm apply to --rho only")
        S = args.transfer
        ev = np.sort(np.linalg.eigvals(transfer_matrix(S)).real)
        exact = [{"j": j, "lambda": str(x), "float": float(x), "multiplicity": 2 * j + 1}
                 for j, x in enumerate(lambda_spectrum(S))]
        payload = {"S": S, "eigenvalues": ev, "exact": exact}
        rows = [[e["j"], e["lambda"], e["float"], e["multiplicity"]] for e in exact]
        return payload, (["j", "lambda", "float", "multiplicity"], rows)
    boundary = args.boundary or "pbc"
    if boundary == "thermo":
        if args.ptdm:
            raise UsageError("--ptdm is not available with --boundary thermo")
        spec = _parse_chain(args.rho, "edges")
        spectrum = thermodynamic_eigenvalues(spec.S, spec.LA, spec.LB, spec.L2)
        spec_info = {**spec.as_dict(), "boundary": "thermo"}
    else:
        spec = _parse_chain(args.rho, boundary)
        sectors = rho_sectors(spec, transposed=args.ptdm)
        spectrum = diagonalize(sectors, symmetric=not args.ptdm)
        spec_info = spec.as_dict()
    payload = {"spec": spec_info, "ptdm": bool(args.ptdm), **_spectrum_payload(spectrum)}
    return payload, (["R", "degeneracy", "index", "eigenvalue"], list(_spectrum_rows(spectrum)))


def _cmd_negativity(args):
    if args.adjacent:
        if args.boundary not in (None, "pbc"):
            raise UsageError("--adjacent describes a periodic chain; drop --boundary")
        spec = _parse_chain([args.adjacent[0], "0", args.adjacent[1], "0", args.adjacent[2], "0"],
                            "pbc")
        result = adjacent_negativity(spec.S, spec.LA, spec.LB)
    else:
        spec = _parse_chain(args.general, args.boundary or "pbc")
        result = numeric_negativity(spec)
    payload = result.as_dict()
    header = ["S", "L1", "LA", "L2", "LB", "L3", "boundary", "method", "value"]
    sd = spec.as_dict()
    row = [sd[k] for k in header[:7]] + [result.method, result.value]
    return payload, (header, [row])


def _cmd_conjecture(args):
    report = conjecture_scan(args.smax, args.budget)
    payload = report.as_dict()
    if args.summary:
        payload.pop("rows")
    header = ["S", "L1", "LA", "L2", "LB", "L3", "boundary", "minimal", "negativity", "vanishes"]
    rows = [[r.spec.S, r.spec.L1, r.spec.LA, r.spec.L2, r.spec.LB, r.spec.L3,
             r.spec.boundary.value, r.minimal, r.value, r.vanishes] for r in report.rows]
    return payload, (header, rows)


def _cmd_figure(args):
    if args.lb < 1 or args.lamax < 1:
        raise UsageError("--lb and --lamax must be at least 1")
    S_list = range(1, args.smax + 1)
    rows = [list(r) for r in figure_data(S_list, args.lb, args.lamax)]
    payload = {
        "LB": args.lb,
        "rows": [{"S": s, "LA": la, "negativity": v} for s, la, v in rows],
        "plateau": {str(S): figure_plateau(S, args.lb) for S in S_list},
    }
    return payload, (["S", "LA", "negativity"], rows)


def _cmd_oracle(args):
    spec = _parse_chain(args.compare, args.boundary or "pbc")
    result = compare(spec, args.cap)
    rho_o, pt_o = oracle_spectra(spec, args.cap)
    result["oracle_spectrum"] = rho_o
    result["oracle_ptdm_spectrum"] = pt_o
    result["analytic_spectrum"] = diagonalize(rho_sectors(spec)).values()
    result["analytic_ptdm_spectrum"] = diagonalize(
        rho_sectors(spec, transposed=True), symmetric=False).values()
    header = ["quantity", "oracle", "analytic"]
    rows = [["negativity", result["negativity"]["oracle"], result["negativity"]["analytic"]]]
    return result, (header, rows)


_COMMANDS = {
    "symbols": _cmd_symbols,
    "spectrum": _cmd_spectrum,
    "negativity": _cmd_negativity,
    "conjecture": _cmd_conjecture,
    "figure": _cmd_figure,
    "oracle": _cmd_oracle,
}


def _output_target(args):
    path = args.out
    csv_flag = getattr(args, "csv", None)
    if args.command == "figure" and csv_flag not in (None, "-"):
        if path and path != csv_flag:
            raise UsageError("--csv PATH and --out name different files")
        path = csv_flag
    return path


def _format(args) -> str:
    csv_flag = getattr(args, "csv", None)
    if args.format and csv_flag and args.format != "csv":
        raise UsageError("--csv conflicts with --format json")
    if args.format:
        return args.format
    if csv_flag or args.command == "figure":
        return "csv"
    return "json"


def run(argv=None, stdout=None, stderr=None) -> int:
    """Parse ``argv``, execute the subcommand and return the exit code."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.precision < 1:
            raise UsageError("--precision must be positive")
        fmt = _format(args)
        path = _output_target(args)
        payload, (header, rows) = _COMMANDS[args.command](args)
        text = _dump_csv(header, rows, args.precision) if fmt == "csv" else _dump_json(payload)
    except UsageError as exc:
        print(f"vbsneg: error: {exc}", file=stderr)
        return EXIT_USAGE
    except (ValueError, OracleTooLarge, NotClosedError) as exc:
        print(f"vbsneg: error: {exc}", file=stderr)
        return EXIT_USAGE
    except NumericalContractError as exc:
        print(f"vbsneg: numerical contract violated: {exc}", file=stderr)
        return EXIT_NUMERIC
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return EXIT_OK


def main() -> None:
    sys.exit(run())
