"""Command-line entry point.

Exit codes: 0 success, 1 usage or configuration error, 2 numerical failure
(blowup, inadmissible state, singular source evaluation).  Identical
invocations produce byte-identical CSV output; timing goes to stderr only.
"""

import argparse
import os
import sys
import time

import numpy as np

from .harness import (CONVERGENCE_TESTS, NAMED_TESTS, format_csv,
                      run_convergence, run_disc_scan, run_lake_at_rest,
                      run_named_test, run_property_r)
from .models import InvalidStateError, SingularPointError
from .solver import BlowupError, parse_tableau_file

_TEST_LINES = (
    "convergence tests: advect_low (smooth advection profile), advect_high"
    " (high-frequency advection profile), swe_smooth (smooth shallow-water"
    " flow over a sine-squared bottom, dimensionless gravity).  solve"
    " tests: burgers (shock"
    " interaction), lax (gas-dynamics Riemann problem), dam_break"
    " (shallow-water dam break over a hump), swe_rough (lake at rest on a"
    " rough random bottom), radial_sod (spherically symmetric Sod tube)."
)


class _Parser(argparse.ArgumentParser):
    # usage problems exit 1; argparse would use 2
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _on_off(value: str) -> bool:
    if value not in ("on", "off"):
        raise argparse.ArgumentTypeError("expected on or off")
    return value == "on"


def _int_list(value: str) -> list:
    try:
        return [int(tok) for tok in value.split(",") if tok]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad integer list {value!r}")


def _float_list(value: str) -> list:
    try:
        return [float(tok) for tok in value.split(",") if tok]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad number list {value!r}")


def _parse_quad(value):
    if value is None:
        return None
    kind, _, par = value.partition(":")
    if kind not in ("gauss", "richardson") or not par.isdigit():
        raise ValueError(f"bad quadrature {value!r}; use gauss:<points>"
                         " or richardson:<order>")
    return kind, int(par)


def _common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--order", type=int, choices=(3, 5, 7, 9), default=5)
    p.add_argument("--N", type=_int_list, default=None,
                   help="cell count, or comma list for studies")
    p.add_argument("--d0", type=_float_list, default=[0.75],
                   help="central linear coefficient (comma list for scans)")
    p.add_argument("--eps-hat", type=float, default=1.0)
    p.add_argument("--eps-power", type=int, choices=(0, 1, 2), default=2)
    p.add_argument("--t-exp", type=int, default=2)
    p.add_argument("--cfl", type=float, default=0.45)
    p.add_argument("--char-proj", type=_on_off, default=False,
                   metavar="{on,off}")
    p.add_argument("--model", default=None,
                   help="model override for solve (e.g. euler_radial2d)")
    p.add_argument("--test", default=None)
    p.add_argument("--tend", type=_float_list, default=None,
                   help="end time, or comma list of snapshot times")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--grid", default="uniform",
                   help="uniform or random:<max neighbor ratio>")
    p.add_argument("--quad", default=None,
                   help="gauss:<points> or richardson:<order>")
    p.add_argument("--wb", type=_on_off, default=None, metavar="{on,off}",
                   help="well-balanced path (default: per test)")
    p.add_argument("--out", default=None,
                   help="CSV file (directory for solve); stdout if absent")
    p.add_argument("--tableau", default=None,
                   help="file with an explicit Butcher tableau")
    p.add_argument("--config", default=None,
                   help="key=value file applied before other flags")
    p.add_argument("--threads", type=int, default=os.cpu_count(),
                   help="thread cap for array backends (best effort;"
                   " runs are single-process)")
    p.add_argument("--timing", action="store_true",
                   help="print wall-clock time to stderr")


def build_parser() -> _Parser:
    parser = _Parser(prog="cweno1d", epilog=_TEST_LINES,
                     description="Finite-volume experiments with central"
                     " WENO reconstructions of orders 3, 5, 7, 9.")
    sub = parser.add_subparsers(dest="command", metavar="command")
    specs = (
        ("convergence", "refinement study on a smooth test",
         cmd_convergence),
        ("solve", "run one benchmark problem to its snapshot times",
         cmd_solve),
        ("wellbalance", "rough-bottom lake at rest, report max |q|",
         cmd_wellbalance),
        ("discscan", "range of the reconstruction across a cell jump",
         cmd_discscan),
        ("property-r", "central-indicator ratio on jump data",
         cmd_property_r),
    )
    for name, help_text, func in specs:
        p = sub.add_parser(name, help=help_text, description=help_text)
        _common_flags(p)
        p.set_defaults(func=func)
    return parser


def _emit(args, columns, rows, metadata) -> None:
    text = format_csv(columns, rows, metadata)
    if args.out:
        with open(args.out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _single(values, flag: str):
    if len(values) != 1:
        raise ValueError(f"{flag} takes a single value here")
    return values[0]


def _weights_metadata(args) -> dict:
    return {"d0": _single(args.d0, "--d0"), "eps_hat": args.eps_hat,
            "eps_power": args.eps_power, "t_exp": args.t_exp}


def cmd_convergence(args) -> int:
    if args.test not in CONVERGENCE_TESTS:
        raise ValueError(f"--test must be one of"
                         f" {', '.join(sorted(CONVERGENCE_TESTS))}")
    n_list = args.N or [40, 80, 160, 320]
    rows = run_convergence(
        args.test, args.order, n_list, d0=_single(args.d0, "--d0"),
        eps_hat=args.eps_hat, eps_power=args.eps_power, t_exp=args.t_exp,
        cfl=args.cfl, char_proj=args.char_proj, grid_kind=args.grid,
        seed=args.seed, quad=_parse_quad(args.quad))
    meta = {"test": args.test, "order": args.order,
            "N": ",".join(str(n) for n in n_list),
            **_weights_metadata(args), "cfl": args.cfl,
            "grid": args.grid, "seed": args.seed}
    _emit(args, ["N", "error", "rate"],
          [(r.N, r.error, r.rate) for r in rows], meta)
    return 0


def cmd_solve(args) -> int:
    if args.test not in NAMED_TESTS:
        raise ValueError(f"--test must be one of"
                         f" {', '.join(sorted(NAMED_TESTS))}")
    model = None
    if args.model is not None:
        from . import models as _m
        factories = {"advection": _m.advection, "burgers": _m.burgers,
                     "euler": _m.euler,
                     "euler_radial2d": lambda: _m.euler_radial(2),
                     "euler_radial3d": lambda: _m.euler_radial(3),
                     "shallow_water": _m.shallow_water}
        if args.model not in factories:
            raise ValueError(f"unknown model {args.model!r}")
        model = factories[args.model]()
    tableau = parse_tableau_file(args.tableau) if args.tableau else None
    n = None if args.N is None else _single(args.N, "--N")
    snaps = run_named_test(
        args.test, order=args.order, n=n, tend=args.tend or None,
        d0=_single(args.d0, "--d0"), eps_hat=args.eps_hat,
        eps_power=args.eps_power, t_exp=args.t_exp, cfl=args.cfl,
        char_proj=args.char_proj, quad=_parse_quad(args.quad),
        seed=args.seed, wb=args.wb, tableau=tableau, model=model)
    outputs = []
    for t, field in snaps:
        meta = {"test": args.test, "order": args.order,
                "N": field.grid.n_cells, **_weights_metadata(args),
                "cfl": args.cfl, "seed": args.seed, "tend": _fmt_time(t)}
        if args.test == "lax":
            meta["tend_source"] = "user" if args.tend else "conventional"
        cols = ["x"] + [f"comp{i}" for i in range(field.m)]
        rows = np.column_stack([field.grid.centers, field.u])
        outputs.append((t, cols, rows, meta))
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        for t, cols, rows, meta in outputs:
            path = os.path.join(args.out,
                                f"{args.test}_t{_fmt_time(t)}.csv")
            with open(path, "w", newline="\n") as fh:
                fh.write(format_csv(cols, rows, meta))
    else:
        t, cols, rows, meta = outputs[-1]
        sys.stdout.write(format_csv(cols, rows, meta))
    return 0


def _fmt_time(t: float) -> str:
    return "%.6g" % t


def cmd_wellbalance(args) -> int:
    n_list = args.N or [100, 200, 400]
    tend = 0.1 if not args.tend else _single(args.tend, "--tend")
    rows = []
    for n in n_list:
        _, max_q = run_lake_at_rest(args.order, n, tend=tend,
                                    seed=args.seed, cfl=args.cfl)
        rows.append((args.order, n, max_q))
        print(f"order={args.order} N={n} max_abs_q={max_q:.17g}")
    if args.out:
        meta = {"test": "swe_rough", "order": args.order,
                "N": ",".join(str(n) for n in n_list), "tend": tend,
                "seed": args.seed, **_weights_metadata(args)}
        with open(args.out, "w", newline="\n") as fh:
            fh.write(format_csv(["order", "N", "max_abs_q"], rows, meta))
    return 0


def cmd_discscan(args) -> int:
    rows = run_disc_scan(args.order, args.d0)
    meta = {"test": "discscan", "order": args.order,
            "d0": ",".join(repr(v) for v in args.d0),
            "t_exp": 2, "eps": 0}
    _emit(args, ["d0", "D", "min", "max"],
          [(r.d0, r.D, r.min_val, r.max_val) for r in rows], meta)
    return 0


def cmd_property_r(args) -> int:
    rows = run_property_r(args.order, args.d0)
    meta = {"test": "property_r", "order": args.order,
            "d0": ",".join(repr(v) for v in args.d0), "eps": 0}
    _emit(args, ["order", "d0", "h", "ratio"], rows, meta)
    return 0


def _apply_config_file(argv: list) -> list:
    if "--config" not in argv:
        return argv
    i = argv.index("--config")
    if i + 1 >= len(argv):
        raise ValueError("--config needs a path")
    path = argv[i + 1]
    rest = argv[:i] + argv[i + 2:]
    tokens = []
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"config line without '=': {line!r}")
            key, value = line.split("=", 1)
            tokens += [f"--{key.strip()}", value.strip()]
    if not rest:
        return tokens
    # keep the subcommand first; explicit flags come later and win
    return [rest[0]] + tokens + rest[1:]


def main(argv=None) -> int:
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    try:
        argv = _apply_config_file(argv)
    except (ValueError, OSError) as exc:
        print(f"cweno1d: error: {exc}", file=sys.stderr)
        return 1
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "func", None) is None:
        parser.print_usage(sys.stderr)
        return 1
    start = time.perf_counter()
    try:
        code = args.func(args)
    except (BlowupError, InvalidStateError, SingularPointError) as exc:
        print(f"cweno1d: numerical failure: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"cweno1d: error: {exc}", file=sys.stderr)
        return 1
    if args.timing:
        print(f"wall clock: {time.perf_counter() - start:.3f} s",
              file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
