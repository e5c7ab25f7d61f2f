"""Command-line front end.

Subcommands::

    guideret point      single (z, R) evaluation
    guideret sweep      z- or R-sweep
    guideret resonance  resonance interaction energy (optionally the force)
    guideret validate   closed-form terms versus direct quadrature

Exit codes: 0 ok, 1 usage, 2 cutoff violation, 3 I/O, 4 oracle failure.
"""
from __future__ import annotations

import argparse
import contextlib
import sys

from . import oracle, sweep
from .errors import ConvergenceError, CutoffError, DomainError
from .guide import Parity, SeriesPolicy
from .model import EmitterPair, GuideSpec, Orientation, violated_cutoffs

EXIT_OK, EXIT_USAGE, EXIT_CUTOFF, EXIT_IO, EXIT_ORACLE = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_float(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return v


def _modes(text):
    if text == "auto":
        return "auto"
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'auto' or an integer, got {text!r}")
    if n < 1:
        raise argparse.ArgumentTypeError("mode count must be at least 1")
    return n


def _common(p):
    p.add_argument("--lambda0", type=_positive_float, default=5e-7, help="transition wavelength (m)")
    p.add_argument("--radius", type=_positive_float, default=1e-8, help="guide radius (m)")
    p.add_argument("--orientation", choices=[o.value for o in Orientation], default="axial")
    p.add_argument("--dipole", type=float, default=1e-30, help="dipole of atom A (C m)")
    p.add_argument("--dipole-b", type=float, default=None, help="dipole of atom B (C m); defaults to --dipole")
    p.add_argument("--modes", type=_modes, default="auto", help="'auto' or a fixed mode count")
    p.add_argument("--tail-tol", type=float, default=1e-8, help="relative tail tolerance for --modes auto")
    p.add_argument("--max-modes", type=int, default=512)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--output", default="-", help="output path, '-' or 'stdout' for standard output")


def _sweep_args(p, z_required):
    p.add_argument("--z", type=_positive_float, required=z_required, help="separation (m)")
    p.add_argument("--var", choices=["z", "R"], default=None)
    p.add_argument("--min", type=_positive_float, default=None)
    p.add_argument("--max", type=_positive_float, default=None)
    p.add_argument("--points", type=int, default=50)
    p.add_argument("--spacing", choices=["linear", "log"], default=None)


def build_parser():
    parser = _Parser(prog="guideret", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("point", help="evaluate one configuration")
    _common(p)
    p.add_argument("--z", type=_positive_float, required=True, help="separation (m)")

    p = sub.add_parser("sweep", help="sweep z or R")
    _common(p)
    _sweep_args(p, z_required=False)

    p = sub.add_parser("resonance", help="resonance interaction energy")
    _common(p)
    _sweep_args(p, z_required=False)
    p.add_argument("--parity", choices=[x.value for x in Parity], default="symmetric")
    p.add_argument("--force", action="store_true", help="add a -dE/dz column")

    p = sub.add_parser("validate", help="check mode terms against quadrature")
    _common(p)
    p.add_argument("--z", type=_positive_float, default=1e-8, help="separation (m)")
    p.add_argument("--rel-tol", type=float, default=1e-6)
    return parser


def _pair(args, z):
    d_b = args.dipole if args.dipole_b is None else args.dipole_b
    return EmitterPair(args.lambda0, z, args.dipole, d_b, args.orientation)


def _guide(args):
    if not 0 < args.tail_tol < 1:
        raise UsageError("--tail-tol must lie in (0, 1)")
    if args.max_modes < 1:
        raise UsageError("--max-modes must be at least 1")
    return GuideSpec(args.radius, args.max_modes, args.tail_tol)


def _policy(args):
    if args.modes == "auto":
        return SeriesPolicy.adaptive(args.tail_tol, args.max_modes)
    if args.modes > args.max_modes:
        raise UsageError(f"--modes {args.modes} exceeds --max-modes {args.max_modes}")
    return SeriesPolicy.fixed(args.modes)


def _spec(args):
    if args.var is None and args.min is None and args.max is None:
        return None
    if args.var is None or args.min is None or args.max is None:
        raise UsageError("a sweep needs --var, --min and --max")
    if args.var == "R" and args.z is None:
        raise UsageError("an R-sweep needs --z")
    try:
        return sweep.SweepSpec(args.var, args.min, args.max, args.points, args.spacing)
    except DomainError as exc:
        raise UsageError(str(exc))


@contextlib.contextmanager
def _open_output(path):
    # opened before any computation so a bad path fails fast
    if path in ("-", "stdout"):
        yield sys.stdout
        return
    try:
        fh = open(path, "w", newline="\n", encoding="utf-8")
    except OSError as exc:
        raise _OutputError(exc)
    with fh:
        yield fh


class _OutputError(Exception):
    pass


def _emit(args, records, fields):
    text = sweep.format_json(records, fields) if args.format == "json" else sweep.format_csv(records, fields)
    args.out.write(text)


def _cutoff_message(pair, g):
    fams = ", ".join(f.value for f in violated_cutoffs(pair, g)) or "branch point"
    return f"cutoff violation: k0 = {pair.k0:.6g} 1/m is not below the {fams} cutoff for R = {g.radius:.6g} m"


def cmd_point(args):
    g = _guide(args)
    pair = _pair(args, args.z)
    row = sweep.evaluate_point(pair, g, _policy(args))
    if row.M_guide is None:
        print(_cutoff_message(pair, g), file=sys.stderr)
        return EXIT_CUTOFF
    _emit(args, [row.record()], sweep.FIELDS)
    return EXIT_OK


def cmd_sweep(args):
    spec = _spec(args)
    if spec is None:
        raise UsageError("sweep needs --var, --min and --max")
    if spec.variable == "z":
        pair = _pair(args, spec.min)
    else:
        pair = _pair(args, args.z)
    rows = sweep.run_sweep(pair, _guide(args), spec, _policy(args))
    _emit(args, [r.record() for r in rows], sweep.FIELDS)
    return EXIT_OK


def cmd_resonance(args):
    spec = _spec(args)
    if spec is None and args.z is None:
        raise UsageError("resonance needs --z or a sweep range")
    z = args.z if args.z is not None else spec.min
    pair = _pair(args, z)
    g = _guide(args)
    rows = sweep.resonance_rows(pair, g, spec, _policy(args), args.parity, args.force)
    if spec is None and rows[0].M_guide is None:
        print(_cutoff_message(pair, g), file=sys.stderr)
        return EXIT_CUTOFF
    fields = sweep.RESONANCE_FIELDS if args.force else sweep.RESONANCE_FIELDS[:-1]
    _emit(args, [r.record(fields) for r in rows], fields)
    return EXIT_OK


VALIDATE_FIELDS = ("family", "mode_index", "closed_form_J", "quadrature_J",
                   "abs_err_J", "rel_err", "segments", "passed")


def cmd_validate(args):
    g = _guide(args)
    pair = _pair(args, args.z)
    if args.modes == "auto":
        modes = 30 if pair.orientation is Orientation.AXIAL else 40
    else:
        modes = args.modes
    if violated_cutoffs(pair, g):
        print(_cutoff_message(pair, g), file=sys.stderr)
        return EXIT_CUTOFF
    try:
        reports = oracle.validate_amplitudes(pair, g, modes, rel_tol=args.rel_tol)
    except ConvergenceError as exc:
        print(f"oracle convergence failure at mode {exc.mode_index}: {exc}", file=sys.stderr)
        return EXIT_ORACLE
    records = [
        {
            "family": r.family.value,
            "mode_index": r.mode_index,
            "closed_form_J": r.closed_form,
            "quadrature_J": r.quadrature,
            "abs_err_J": r.abs_err,
            "rel_err": r.rel_err,
            "segments": r.segments,
            "passed": bool(r.passed),
        }
        for r in reports
    ]
    _emit(args, records, VALIDATE_FIELDS)
    rels = [r.rel_err for r in reports if r.rel_err is not None]
    ok = all(r.passed for r in reports)
    worst = max(rels) if rels else 0.0
    print(f"reports={len(reports)} max_rel_err={worst:.3e} "
          f"status={'pass' if ok else 'fail'}", file=sys.stderr)
    return EXIT_OK if ok else EXIT_ORACLE


_COMMANDS = {
    "point": cmd_point,
    "sweep": cmd_sweep,
    "resonance": cmd_resonance,
    "validate": cmd_validate,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        with _open_output(args.output) as out:
            args.out = out
            return _COMMANDS[args.command](args)
    except _OutputError as exc:
        print(f"guideret: cannot open output: {exc}", file=sys.stderr)
        return EXIT_IO
    except (UsageError, DomainError) as exc:
        parser.print_usage(sys.stderr)
        print(f"guideret: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CutoffError as exc:
        print(f"cutoff violation: {exc}", file=sys.stderr)
        return EXIT_CUTOFF
    except OSError as exc:
        print(f"guideret: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
