"""Command-line interface: ``wfootrule {truth,estimate,test,simulate}``.

Exit codes: 0 success, 1 usage error, 2 numerical failure, 3 data error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import warnings
from pathlib import Path

from .copulas import parse_copula
from .estimation import TieError, TieWarning, estimate
from .montecarlo import bias_decay_report, load_manifest, render_table, run_table
from .quadrature import QuadratureError
from .truth import true_values

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_DATA = 0, 1, 2, 3
SEED_ENV = "WFOOTRULE_SEED"


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _alpha(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"--alpha expects a number, got {text!r}") from None
    if not 0.0 < value < 1.0:
        raise argparse.ArgumentTypeError(f"--alpha must lie in (0, 1), got {text}")
    return value


def _positive(name):
    def parse(text):
        try:
            value = float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} expects a number, got {text!r}") from None
        if not value > 0:
            raise argparse.ArgumentTypeError(f"{name} must be positive, got {text}")
        return value
    return parse


def _seed(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"--seed expects an unsigned 64-bit integer, got {text!r}") from None
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"--seed must be an unsigned 64-bit integer, got {text}")
    return value


def _jobs(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"--jobs expects an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"--jobs must be >= 1, got {text}")
    return value


def _copula(text):
    try:
        return parse_copula(text)
    except (ValueError, TypeError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wfootrule", description="W-footrule coefficient toolkit")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("truth", help="population coefficients of a copula (JSON)")
    p.add_argument("--copula", required=True, type=_copula,
                   help="e.g. gaussian:rho=-0.9, clayton:theta=5, frank:theta=-5, pi, w, m")
    p.add_argument("--tol", type=_positive("--tol"), default=1e-9)
    p.add_argument("--json", action="store_true", help="full precision")

    for name, text in (("estimate", "estimate the coefficients from a two-column CSV"),
                       ("test", "one-sided test of perfect negative dependence")):
        p = sub.add_parser(name, help=text)
        p.add_argument("--input", required=True, type=Path)
        p.add_argument("--cols", default=None, help="two column names or 0-based indices, e.g. x,y")
        p.add_argument("--alpha", type=_alpha, default=0.05)
        p.add_argument("--ties", choices=("midrank", "error"), default="midrank")
        p.add_argument("--json", action="store_true")
        if name == "estimate":
            p.add_argument("--footrule", choices=("pseudo", "classical"), default="pseudo")

    p = sub.add_parser("simulate", help="Monte Carlo study from a TOML manifest")
    p.add_argument("--manifest", type=Path, default=None, help="defaults to the bundled grid")
    p.add_argument("--scale", type=_positive("--scale"), default=1.0, help="multiply every B")
    p.add_argument("--jobs", type=_jobs, default=1)
    p.add_argument("--seed", type=_seed, default=None)
    p.add_argument("--out", type=Path, default=None)
    p.add_argument("--format", choices=("csv", "md"), default="md")
    p.add_argument("--json", action="store_true")
    return parser


def _finite(x):
    if isinstance(x, float) and not math.isfinite(x):
        return "inf" if x > 0 else "-inf" if x < 0 else "nan"
    return x


def _dump(obj) -> str:
    if isinstance(obj, dict):
        obj = {k: _finite(v) for k, v in obj.items()}
    return json.dumps(obj, indent=2, allow_nan=False)


def read_pairs(path: Path, cols: str | None):
    """Read two numeric columns from a CSV file with an optional header."""
    try:
        with open(path, newline="") as fh:
            rows = [row for row in csv.reader(fh) if any(cell.strip() for cell in row)]
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from None
    if not rows:
        raise DataError(f"{path}: no data")

    def numeric(row):
        try:
            [float(c) for c in row]
            return True
        except ValueError:
            return False

    header = None if numeric(rows[0]) else [c.strip() for c in rows[0]]
    body = rows if header is None else rows[1:]
    first_line = 1 if header is None else 2
    if cols is None:
        idx = (0, 1)
    else:
        names = [c.strip() for c in cols.split(",")]
        if len(names) != 2:
            raise UsageError(f"--cols needs exactly two columns, got {cols!r}")
        idx = []
        for name in names:
            if header is not None and name in header:
                idx.append(header.index(name))
            elif name.isdigit():
                idx.append(int(name))
            else:
                raise UsageError(f"--cols: unknown column {name!r}")
        idx = tuple(idx)
    xs, ys = [], []
    for lineno, row in enumerate(body, start=first_line):
        try:
            x, y = float(row[idx[0]]), float(row[idx[1]])
        except IndexError:
            raise DataError(f"{path}, line {lineno}: missing column") from None
        except ValueError:
            raise DataError(f"{path}, line {lineno}: non-numeric value") from None
        if not (math.isfinite(x) and math.isfinite(y)):
            raise DataError(f"{path}, line {lineno}: non-finite value")
        xs.append(x)
        ys.append(y)
    if len(xs) < 2:
        raise DataError(f"{path}: need at least 2 data rows, got {len(xs)}")
    return xs, ys


def _cmd_truth(args, out):
    tv = true_values(args.copula, args.tol).as_dict()
    if not args.json:
        for key in ("phi_w", "footrule", "gini"):
            tv[key] = round(tv[key], 5)
    tv["copula"] = str(args.copula)
    out.write(_dump(tv) + "\n")


def _estimate_report(args):
    xs, ys = read_pairs(args.input, args.cols)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", TieWarning)
        try:
            report = estimate(xs, ys, alpha=args.alpha, ties=args.ties,
                              footrule=getattr(args, "footrule", "pseudo"))
        except TieError as exc:
            raise DataError(f"{args.input}: {exc} (use --ties midrank)") from None
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    return report


def _text(pairs) -> str:
    width = max(len(k) for k, _ in pairs)
    lines = []
    for key, value in pairs:
        if isinstance(value, float):
            value = f"{value:.5f}" if math.isfinite(value) else str(value)
        lines.append(f"{key.ljust(width)}  {value}")
    return "\n".join(lines) + "\n"


def _cmd_estimate(args, out):
    report = _estimate_report(args)
    if args.json:
        out.write(_dump(report.as_dict()) + "\n")
        return
    level = 100 * (1 - args.alpha)
    out.write(_text([
        ("n", report.n),
        ("phi_hat", report.phi_hat),
        ("footrule_hat", report.footrule_hat),
        ("gini_hat", report.gini_hat),
        ("sigma_hat", report.sigma_hat),
        (f"ci_{level:g}%", f"[{report.ci_low:.5f}, {report.ci_high:.5f}]"),
        ("test_stat", report.test_stat),
        ("p_value", report.p_value),
    ]))


def _cmd_test(args, out):
    report = _estimate_report(args)
    if report.boundary:
        verdict = "at boundary (sample is exactly countermonotone): H0 not rejected by convention"
    elif report.reject:
        verdict = f"reject H0: C = W at level {args.alpha:g}"
    else:
        verdict = f"do not reject H0: C = W at level {args.alpha:g}"
    if args.json:
        out.write(_dump({
            "verdict": verdict, "reject": report.reject, "boundary": report.boundary,
            "test_stat": report.test_stat, "p_value": report.p_value,
            "phi_hat": report.phi_hat, "sigma_hat": report.sigma_hat,
            "n": report.n, "alpha": report.alpha,
        }) + "\n")
        return
    out.write(_text([("verdict", verdict), ("T_n", report.test_stat),
                     ("p_value", report.p_value), ("phi_hat", report.phi_hat)]))


def _resolve_seed(flag):
    if flag is not None:
        return flag
    env = os.environ.get(SEED_ENV)
    if env is None:
        return None
    try:
        return _seed(env)
    except argparse.ArgumentTypeError as exc:
        raise UsageError(f"{SEED_ENV}: {exc}") from None


def _cmd_simulate(args, out):
    seed = _resolve_seed(args.seed)
    try:
        scenarios = load_manifest(args.manifest, scale=args.scale, seed=seed)
    except OSError as exc:
        raise DataError(f"cannot read manifest: {exc}") from None
    except (ValueError, TypeError, KeyError) as exc:
        raise DataError(f"invalid manifest: {exc}") from None
    results = run_table(scenarios, jobs=args.jobs)
    if args.json:
        payload = []
        for res in results:
            s = res.scenario
            payload.append({
                "copula": str(s.copula), "n": s.n, "B": s.B, "seed": s.seed,
                "truth": res.truth.as_dict(),
                "summary": {k: v._asdict() for k, v in res.summary.items()},
                "wall_time": res.wall_time, "error": res.error,
            })
        text = json.dumps({"results": payload, "rates": bias_decay_report(results)},
                          indent=2, default=_finite)
        text = text + "\n"
    else:
        text = render_table(results, args.format)
    if args.out is not None:
        args.out.write_text(text)
    else:
        out.write(text)
    return EXIT_NUMERIC if any(not r.ok for r in results) else EXIT_OK


_COMMANDS = {"truth": _cmd_truth, "estimate": _cmd_estimate, "test": _cmd_test,
             "simulate": _cmd_simulate}


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            parser.print_usage(sys.stderr)
            return EXIT_USAGE
        return _COMMANDS[args.command](args, out) or EXIT_OK
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (QuadratureError, FloatingPointError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
