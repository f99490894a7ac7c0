"""Command-line front end.

Every command writes either an experiment report or a value table, as CSV
(``#`` metadata comments, one header line) or JSON
(``{"metadata": {...}, "rows": [...]}``).  Numbers are printed with 12
significant digits, so identical flags give byte-identical output.

Exit status: 0 on success, 1 on a numerical failure (for example r >= 1),
2 on invalid flags.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys

import numpy as np

from . import analysis, kernels
from .analysis import ExperimentReport, Row
from .basis import hn_mask
from .means import CoefficientTable

POINT_SUM_TOL = 1e-9

# CSV columns per report command: (header, row attribute or extra key)
COLUMNS = {
    "lebesgue": [("n", "param"), ("L", "measured"), ("ratio", "ratio")],
    "moment": [("n", "param"), ("d", "measured"), ("bound", "bound"), ("ratio", "ratio")],
    "poisson-moment": [("r", "param"), ("lambda", "measured"), ("bound", "bound"),
                       ("ratio", "ratio")],
    "cesaro-approx": [("n", "param"), ("error", "measured"), ("omega", "omega"),
                      ("bound", "bound"), ("ratio", "ratio")],
    "poisson-approx": [("r", "param"), ("error", "measured"), ("omega", "omega"),
                       ("bound", "bound"), ("ratio", "ratio")],
    "lemma1": [("n", "param"), ("u", "u"), ("measured", "measured"), ("bound", "bound"),
               ("ratio", "ratio")],
}


class FlagError(Exception):
    pass


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    s = format(x, ".12g")
    return "0" if s == "-0" else s


def _round(x):
    """Round floats to 12 significant digits for JSON output."""
    if isinstance(x, dict):
        return {k: _round(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_round(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if not math.isfinite(x) else float(format(x, ".12g"))
    return x


def _dumps(obj) -> str:
    return json.dumps(_round(obj), sort_keys=False, indent=2) + "\n"


# ---------------------------------------------------------------------------
# report serialisation

def report_to_dict(report: ExperimentReport) -> dict:
    rows = []
    for r in report.rows:
        d = {"param": r.param, "measured": r.measured, "bound": r.bound, "ratio": r.ratio}
        d.update(sorted(r.extra.items()))
        rows.append(d)
    return {"metadata": dict(sorted(report.metadata.items())), "rows": rows}


def report_to_json(report: ExperimentReport) -> str:
    return _dumps(report_to_dict(report))


def report_from_json(text: str) -> ExperimentReport:
    data = json.loads(text)
    rows = []
    for d in data["rows"]:
        d = dict(d)
        core = {k: d.pop(k) for k in ("param", "measured", "bound", "ratio")}
        rows.append(Row(**core, extra=d))
    return ExperimentReport(rows, data.get("metadata", {}))


def _meta_lines(meta: dict) -> list:
    return [f"# {k}={json.dumps(_round(v), sort_keys=True)}" for k, v in sorted(meta.items())]


def report_to_csv(report: ExperimentReport, command: str) -> str:
    cols = list(COLUMNS[command])
    if report.rows and "rel_change" in report.rows[0].extra:
        cols.append(("rel_change", "rel_change"))
    lines = _meta_lines(report.metadata)
    lines.append(",".join(h for h, _ in cols))
    for r in report.rows:
        vals = [getattr(r, key) if key in ("param", "measured", "bound", "ratio")
                else r.extra[key] for _, key in cols]
        lines.append(",".join(fmt(v) for v in vals))
    return "\n".join(lines) + "\n"


def table_to_csv(meta: dict, header: list, rows: list) -> str:
    lines = _meta_lines(meta)
    lines.append(",".join(header))
    lines.extend(",".join(fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# argument parsing

def _point(text: str):
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid point {text!r}")
    if len(vals) != 3:
        raise argparse.ArgumentTypeError(f"point {text!r} needs three coordinates t1,t2,t3")
    if abs(sum(vals)) > POINT_SUM_TOL:
        raise argparse.ArgumentTypeError(f"point {text!r} does not satisfy t1+t2+t3=0")
    return vals


def _float_list(text: str):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid number list {text!r}")


def _int_list(text: str):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer list {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hexfourier",
        description="Fourier analysis on the hexagonal lattice: kernels, summability means and "
                    "approximation experiments.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--output", "-o", default="-", help="output file (default stdout)")
        return p

    p = common(sub.add_parser("kernel-eval", help="evaluate a kernel at points"))
    p.add_argument("--kernel", required=True,
                   choices=("dirichlet", "dirichlet-direct", "theta", "cesaro",
                            "poisson", "poisson-series"))
    p.add_argument("--n", type=int)
    p.add_argument("--delta", type=float)
    p.add_argument("--r", type=float)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--t", type=_point, action="append", required=True,
                   help="point t1,t2,t3 (repeatable)")

    for name, helptext in (("lebesgue", "L1 norms of Cesaro kernels"),
                           ("moment", "hex-norm moments of Cesaro kernels")):
        p = common(sub.add_parser(name, help=helptext))
        p.add_argument("--delta", type=float, required=True)
        p.add_argument("--n-max", type=int)
        p.add_argument("--n-values", type=_int_list, help="explicit comma list of n")
        p.add_argument("--grid-n", type=int, default=0,
                       help="minimum grid refinement (8(n+1) is always enforced)")
        p.add_argument("--stability", action="store_true",
                       help="add the relative change of each value when N is doubled")

    p = common(sub.add_parser("poisson-moment", help="hex-norm moments of the Poisson kernel"))
    p.add_argument("--r", type=_float_list, required=True, help="comma list of r")
    p.add_argument("--grid-n", type=int, default=0)
    p.add_argument("--stability", action="store_true")

    p = common(sub.add_parser("cesaro-approx", help="sup error of Cesaro means"))
    p.add_argument("--function", default="f3")
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--n-max", type=int)
    p.add_argument("--n-min", type=int, default=1)
    p.add_argument("--n-values", type=_int_list)
    p.add_argument("--grid-n", type=int)
    p.add_argument("--eval-n", type=int, default=32)
    p.add_argument("--n-dirs", type=int, default=200)

    p = common(sub.add_parser("poisson-approx", help="sup error of Abel-Poisson means"))
    p.add_argument("--function", default="f3")
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--r", type=_float_list, required=True)
    p.add_argument("--grid-n", type=int, default=64)
    p.add_argument("--eval-n", type=int, default=8)
    p.add_argument("--tol", type=float, default=1e-5)
    p.add_argument("--n-dirs", type=int, default=200)

    p = common(sub.add_parser("lemma1", help="Cesaro cosine sums against their bound"))
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--u-count", type=int, default=20)
    p.add_argument("--u-margin", type=float, default=0.05)

    p = common(sub.add_parser("coeffs", help="Fourier coefficients of a test function"))
    p.add_argument("--function", required=True)
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--grid-n", type=int)
    return parser


def _n_values(args):
    if args.n_values:
        return sorted(set(args.n_values))
    if args.n_max is None:
        raise FlagError("--n-max or --n-values is required")
    lo = getattr(args, "n_min", 0)
    return list(range(lo, args.n_max + 1))


def _validate(args):
    if args.command == "kernel-eval":
        need = {"dirichlet": ["n"], "dirichlet-direct": ["n"], "theta": ["n"],
                "cesaro": ["n", "delta"], "poisson": ["r"], "poisson-series": ["r"]}
        for flag in need[args.kernel]:
            if getattr(args, flag) is None:
                raise FlagError(f"--{flag} is required for --kernel {args.kernel}")
    if args.command in ("lebesgue", "moment", "cesaro-approx"):
        if any(n < 0 for n in _n_values(args)):
            raise FlagError("n values must be non-negative")
        if not _n_values(args):
            raise FlagError("empty n range")
    if getattr(args, "n_max", None) is not None and args.n_max < 0:
        raise FlagError("--n-max must be non-negative")
    for flag in ("grid_n", "eval_n", "n_dirs", "u_count"):
        v = getattr(args, flag, None)
        if v is not None and v < 0:
            raise FlagError(f"--{flag.replace('_', '-')} must be non-negative")
    if args.command in ("cesaro-approx", "poisson-approx", "coeffs"):
        try:
            analysis.get_test_function(args.function, args.alpha)
        except KeyError as exc:
            raise FlagError(str(exc.args[0]))


# ---------------------------------------------------------------------------
# commands

def _kernel_eval(args):
    pts = np.array(args.t, dtype=float)
    k = args.kernel
    if k == "dirichlet":
        vals = kernels.dirichlet(args.n, pts)
    elif k == "dirichlet-direct":
        vals = kernels.dirichlet_direct(args.n, pts)
    elif k == "theta":
        vals = kernels.theta(args.n, pts)
    elif k == "cesaro":
        vals = kernels.cesaro_kernel(args.n, args.delta, pts)
    elif k == "poisson":
        vals = kernels.poisson_compact(args.r, pts)
    else:
        vals = kernels.poisson_series(args.r, pts, args.tol)
    meta = {"command": "kernel-eval", "kernel": k}
    for flag in ("n", "delta", "r"):
        if getattr(args, flag) is not None:
            meta[flag] = getattr(args, flag)
    rows = [[*p, v] for p, v in zip(pts.tolist(), np.atleast_1d(vals).tolist())]
    header = ["t1", "t2", "t3", "value"]
    if args.format == "csv":
        return table_to_csv(meta, header, rows)
    return _dumps({"metadata": meta, "rows": [dict(zip(header, r)) for r in rows]})


def _coeffs(args):
    f = analysis.get_test_function(args.function, args.alpha)
    N = args.grid_n or 2 * args.n_max + 2
    table = CoefficientTable.from_function(f, args.n_max, N)
    meta = {"command": "coeffs", "function": f.name, "n_max": args.n_max, "grid_n": N}
    if f.name == "f4":
        meta["alpha"] = args.alpha
    n = args.n_max
    entries = [(a - n, b - n, -(a - n) - (b - n), table.matrix[a, b])
               for a, b in zip(*np.nonzero(hn_mask(n)))]
    if args.format == "csv":
        rows = [[j1, j2, j3, c.real, c.imag] for j1, j2, j3, c in entries]
        return table_to_csv(meta, ["j1", "j2", "j3", "re", "im"], rows)
    coeffs = {f"{j1},{j2},{j3}": [c.real, c.imag] for j1, j2, j3, c in entries}
    return _dumps({"metadata": meta, "coefficients": coeffs})


def _report(args) -> ExperimentReport:
    c = args.command
    if c == "lebesgue":
        rep = analysis.lebesgue_sweep(args.delta, _n_values(args), args.grid_n,
                                      args.stability)
    elif c == "moment":
        rep = analysis.moment_sweep(args.delta, _n_values(args), args.grid_n, args.stability)
    elif c == "poisson-moment":
        rep = analysis.poisson_moment_sweep(args.r, args.grid_n, args.stability)
    elif c == "cesaro-approx":
        f = analysis.get_test_function(args.function, args.alpha)
        rep = analysis.experiment_cesaro(f, args.delta, _n_values(args), N=args.grid_n,
                                         eval_n=args.eval_n, n_dirs=args.n_dirs)
    elif c == "poisson-approx":
        f = analysis.get_test_function(args.function, args.alpha)
        rep = analysis.experiment_poisson(f, args.r, N=args.grid_n, eval_n=args.eval_n,
                                          tol=args.tol, n_dirs=args.n_dirs)
    else:
        m = args.u_margin
        u = np.linspace(m, math.pi - m, args.u_count)
        rep = analysis.verify_lemma1(range(args.n_max + 1), args.delta, u)
    rep.metadata["command"] = c
    if getattr(args, "function", None) == "f4":
        rep.metadata["alpha"] = args.alpha
    return rep


def run(args) -> str:
    if args.command == "kernel-eval":
        return _kernel_eval(args)
    if args.command == "coeffs":
        return _coeffs(args)
    rep = _report(args)
    if args.format == "json":
        return report_to_json(rep)
    return report_to_csv(rep, args.command)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _validate(args)
    except FlagError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 2
    try:
        text = run(args)
    except (ValueError, ArithmeticError) as exc:
        print(f"{parser.prog}: numerical failure: {exc}", file=sys.stderr)
        return 1
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with io.open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
