"""Command-line interface: ``relqfi sweep | figures | verify | oracle``.

Exit codes: 0 ok, 1 verification failure, 2 usage error, 3 numerical failure.
Data goes to files or standard output; log messages go to standard error.
"""
import argparse
import json
import logging
import os
import sys

import numpy as np

from . import __version__, _accel
from .errors import InvalidParameters, RelqfiError
from .fisher import PolarGrid, build_reduced_model, fim_lambda_analytic, fim_lambda_general
from .model import ModelParams
from .svg import table_to_svg
from .sweeps import DEFAULTS, FIGURE_OF, QUANTITIES, SweepRequest, parse_values, run_sweep, to_csv, to_json
from .verify import report, run_verify

log = logging.getLogger("relqfi")

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3
LOG_LEVELS = ["DEBUG", "INFO", "WARNING", "ERROR"]


def _add_physics_flags(p):
    p.add_argument("--mass", type=float, default=1.0, help="rest mass m (energy unit E, default 1)")
    p.add_argument("--kappa", help="spread kappa in 1/E: list 'a,b,c' or range 'start:stop:count'")
    p.add_argument("--velocity", help="observer velocity V in [0, 1]: list or range")
    p.add_argument("--lambda", dest="lam", help="lambda in [0, 1]: list or range")


def _add_output_flags(p, formats=("csv", "json", "svg")):
    p.add_argument("--format", choices=formats, default=formats[0])
    p.add_argument("--out", help="output file (default: standard output)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="relqfi",
        description="Quantum Fisher information and SLD/lambda-LD tradeoff for a boosted spin-1/2 wave packet.",
    )
    parser.add_argument("--version", action="version", version=f"relqfi {__version__}")
    parser.add_argument("--log-level", default="WARNING", choices=LOG_LEVELS)
    # accepted after the subcommand too; SUPPRESS keeps the top-level value otherwise
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--log-level", default=argparse.SUPPRESS, choices=LOG_LEVELS)
    sub = parser.add_subparsers(dest="command", required=True)

    sw = sub.add_parser("sweep", parents=[common], help="evaluate one figure quantity over a parameter grid")
    sw.add_argument("quantity", choices=QUANTITIES)
    _add_physics_flags(sw)
    sw.add_argument("--tol", type=float, default=None, help="relative quadrature tolerance for zeta and xi")
    sw.add_argument("--jobs", type=int, default=1, help="worker processes (output order is unaffected)")
    _add_output_flags(sw)

    fg = sub.add_parser("figures", parents=[common], help="write the data of figures 1, 3, 4 and 5 with default grids")
    fg.add_argument("--outdir", default=".", help="directory for fig*.csv (and .svg with --svg)")
    fg.add_argument("--svg", action="store_true", help="also write SVG line plots")
    fg.add_argument("--jobs", type=int, default=1)

    vf = sub.add_parser("verify", parents=[common], help="run the self-verification suite and print a JSON report")
    vf.add_argument("--level", choices=["fast", "full"], default="fast")
    vf.add_argument("--grid-radial", type=int, default=PolarGrid.n_radial)
    vf.add_argument("--grid-angular", type=int, default=PolarGrid.n_angular)
    vf.add_argument("--out", help="write the JSON report here instead of standard output")
    vf.add_argument("--inject-failure", metavar="CHECK", help=argparse.SUPPRESS)

    oc = sub.add_parser("oracle", parents=[common], help="compare the general lambda-LD Fisher matrix of the reduced model with the closed form")
    _add_physics_flags(oc)
    oc.add_argument("--grid-radial", type=int, default=PolarGrid.n_radial)
    oc.add_argument("--grid-angular", type=int, default=PolarGrid.n_angular)
    _add_output_flags(oc, formats=("csv", "json"))
    return parser


def _values(text, default):
    return parse_values(text) if text else list(default)


def _emit(text, out):
    if out:
        with open(out, "w", newline="\n") as fh:
            fh.write(text)
        log.info("wrote %s", out)
    else:
        sys.stdout.write(text)


def _serialise(table, fmt):
    if fmt == "csv":
        return to_csv(table)
    if fmt == "json":
        return to_json(table)
    return table_to_svg(table)


def cmd_sweep(args):
    defaults = DEFAULTS[args.quantity]
    kappa_primes = [args.mass * k for k in parse_values(args.kappa)] if args.kappa else defaults["kappa_primes"]
    request = SweepRequest(
        quantity=args.quantity,
        kappa_primes=tuple(kappa_primes),
        velocities=tuple(_values(args.velocity, defaults["velocities"])),
        lambdas=tuple(_values(args.lam, defaults["lambdas"])),
        mass=args.mass,
        relative_tolerance=args.tol if args.tol is not None else SweepRequest.relative_tolerance,
        jobs=args.jobs,
    )
    log.info("sweep %s: %d points, backend %s", args.quantity, len(request.points()), _accel.backend_name())
    _emit(_serialise(run_sweep(request), args.format), args.out)
    return EXIT_OK


def cmd_figures(args):
    os.makedirs(args.outdir, exist_ok=True)
    for quantity in QUANTITIES:
        table = run_sweep(SweepRequest(quantity=quantity, jobs=args.jobs))
        stem = os.path.join(args.outdir, FIGURE_OF[quantity])
        _emit(to_csv(table), stem + ".csv")
        if args.svg:
            _emit(table_to_svg(table), stem + ".svg")
    return EXIT_OK


def cmd_verify(args):
    grid = PolarGrid(n_radial=args.grid_radial, n_angular=args.grid_angular)
    checks, ok, seconds = run_verify(args.level, inject_failure=args.inject_failure, grid_spec=grid)
    for c in checks:
        log.info("%s %s measured=%s tol=%s", "PASS" if c.passed else "FAIL", c.name, c.measured, c.tolerance)
    _emit(json.dumps(report(checks, args.level, seconds), indent=1) + "\n", args.out)
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_oracle(args):
    grid = PolarGrid(n_radial=args.grid_radial, n_angular=args.grid_angular)
    kappas = parse_values(args.kappa) if args.kappa else [1.0]
    velocities = _values(args.velocity, [0.5])
    lambdas = _values(args.lam, [0.0, 0.3, 0.7])
    if any(not 0.0 <= lam < 1.0 for lam in lambdas):
        raise InvalidParameters("oracle lambda values must lie in [0, 1) (the reduced state is rank deficient)")
    columns = ["m_kappa", "velocity", "lambda", "dim", "rank", "J11_general", "J11_analytic",
               "ImJ12_general", "ImJ12_analytic", "relative_frobenius_error"]
    rows = []
    for k in kappas:
        for v in velocities:
            params = ModelParams(k, v, args.mass)
            model = build_reduced_model(params, grid=grid)
            for lam in lambdas:
                ref = fim_lambda_analytic(lam, params).to_array()
                # general routine is indexed tr(d_n rho L_m^dagger), the transpose of the closed form
                gen = fim_lambda_general(model, lam).T
                err = np.linalg.norm(gen - ref) / np.linalg.norm(ref)
                rows.append([params.kappa_prime, v, lam, model.dim, model.rank, gen[0, 0].real,
                             ref[0, 0].real, gen[0, 1].imag, ref[0, 1].imag, err])
    if args.format == "json":
        text = json.dumps({c: [r[i] for r in rows] for i, c in enumerate(columns)}, indent=1) + "\n"
    else:
        lines = [f"# relqfi {__version__} oracle: general lambda-LD FIM of the reduced model vs closed form",
                 f"# mass: {args.mass!r}; grid: {grid.n_radial} radial x {grid.n_angular} angular nodes",
                 ",".join(columns)]
        lines += [",".join(str(x) if isinstance(x, int) else format(float(x), ".17g") for x in r) for r in rows]
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return EXIT_OK


COMMANDS = {"sweep": cmd_sweep, "figures": cmd_figures, "verify": cmd_verify, "oracle": cmd_oracle}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(stream=sys.stderr, level=getattr(logging, args.log_level),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except InvalidParameters as exc:
        print(f"relqfi: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (RelqfiError, ArithmeticError) as exc:
        print(f"relqfi: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"relqfi: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
