"""Command-line front end.

Commands
--------
estimate   measures with standard errors and intervals from a CSV of pairs
process    time-averaged measures over a lag range from a one-column CSV
simulate   draw a catalog model into a CSV file
verify     compare catalog closed forms with replicated Monte Carlo estimates

JSON output is one record per line with sorted keys; nonfinite numbers
are written as ``null``.  Exit codes: 0 success, 1 verification failure,
2 usage or data error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Dict, List, Optional, Sequence, TextIO

import numpy as np

from .charfn import DomainError, PairedSample
from .estimation import Trajectory, estimate, time_avg_sweep
from .measures import MeasureKind
from .models import MODELS, analytic_measures, build_model, sample
from .oracle import discrepancy, mc_measure

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


class UsageError(Exception):
    """Bad arguments or unreadable input; maps to exit code 2."""


# -- parsing helpers ---------------------------------------------------------

def _parse_thetas(text: str, allow_zero: bool = False) -> List[float]:
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        try:
            val = float(tok)
        except ValueError:
            raise UsageError(f"--theta: not a number: {tok!r}") from None
        if not math.isfinite(val) or (val == 0 and not allow_zero):
            raise UsageError(f"--theta: values must be finite and nonzero, got {tok!r}")
        out.append(val)
    return sorted(set(out))


def _parse_kinds(text: str) -> List[MeasureKind]:
    try:
        kinds = {MeasureKind.parse(tok.strip()) for tok in text.split(",") if tok.strip()}
    except DomainError as exc:
        raise UsageError(f"--measure: {exc}") from None
    if not kinds:
        raise UsageError("--measure: empty list")
    return sorted(kinds, key=lambda k: k.value)


def _parse_lags(text: str) -> List[int]:
    lags = set()
    for tok in text.split(","):
        tok = tok.strip()
        try:
            if "-" in tok:
                lo, hi = (int(v) for v in tok.split("-", 1))
                if hi < lo:
                    raise ValueError
                lags.update(range(lo, hi + 1))
            else:
                lags.add(int(tok))
        except ValueError:
            raise UsageError(f"--lags: expected integers or ranges a-b, got {tok!r}") from None
    if any(l < 0 for l in lags):
        raise UsageError("--lags: lags must be nonnegative")
    return sorted(lags)


def _parse_params(text: Optional[str]) -> Dict[str, str]:
    params: Dict[str, str] = {}
    if not text:
        return params
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        if "=" not in tok:
            raise UsageError(f"--params: expected key=value, got {tok!r}")
        key, val = tok.split("=", 1)
        params[key.strip()] = val.strip()
    return params


def _read_columns(path: str, cols: Optional[str], max_cols: int) -> List[np.ndarray]:
    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    if not rows:
        raise UsageError(f"{path}: empty file")
    header = [h.strip() for h in rows[0]]
    if cols:
        wanted = [c.strip() for c in cols.split(",")]
        idx = []
        for c in wanted:
            if c in header:
                idx.append(header.index(c))
            elif c.isdigit() and int(c) < len(header):
                idx.append(int(c))
            else:
                raise UsageError(f"{path}: no column {c!r}; header is {','.join(header)}")
    else:
        idx = list(range(min(len(header), max_cols)))
    if len(idx) > max_cols:
        raise UsageError(f"select at most {max_cols} column(s)")
    data = [[] for _ in idx]
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != len(header):
            raise UsageError(f"{path}: row {lineno} has {len(row)} fields, "
                             f"header has {len(header)}")
        for out, j in zip(data, idx):
            cell = row[j].strip()
            try:
                val = float(cell)
            except ValueError:
                val = math.nan
            if not math.isfinite(val):
                raise UsageError(f"{path}: row {lineno}, column {header[j]!r}: "
                                 f"not a finite number: {cell!r}")
            out.append(val)
    if not data or not data[0]:
        raise UsageError(f"{path}: no data rows")
    return [np.asarray(d) for d in data]


def _num(x):
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else None


def _dump(records: Sequence[dict], out: TextIO):
    for rec in records:
        out.write(json.dumps(rec, sort_keys=True, allow_nan=False) + "\n")


class _Output:
    def __init__(self, path: Optional[str]):
        self.path = path

    def __enter__(self) -> TextIO:
        if self.path is None:
            return sys.stdout
        try:
            self._fh = open(self.path, "w", newline="")
        except OSError as exc:
            raise UsageError(f"cannot write {self.path}: {exc.strerror}") from None
        return self._fh

    def __exit__(self, *exc):
        if self.path is not None:
            self._fh.close()


# -- commands ------------------------------------------------------------------

def cmd_estimate(args) -> int:
    thetas = _parse_thetas(args.theta)
    kinds = _parse_kinds(args.measure)
    if not 0 < args.ci < 1:
        raise UsageError("--ci must lie in (0, 1)")
    columns = _read_columns(args.input, args.cols, 2)
    if len(columns) == 1:
        if any(k is not MeasureKind.LCF for k in kinds):
            raise UsageError("a single column supports only the lcf")
        data = PairedSample(columns[0], columns[0])
    else:
        data = PairedSample(columns[0], columns[1])
    records = []
    for kind in kinds:
        for theta in thetas:
            est = estimate(data, kind, theta, level=args.ci)
            stderr = est.stderr if math.isfinite(est.asympt_variance) else None
            records.append({"measure": kind.value, "theta": theta,
                            "estimate": _num(est.value), "stderr": _num(stderr),
                            "ci_low": _num(est.ci[0]), "ci_high": _num(est.ci[1]),
                            "n": est.n, "flagged": bool(est.flagged)})
    with _Output(args.output) as out:
        _dump(records, out)
    return EXIT_OK


def cmd_process(args) -> int:
    thetas = _parse_thetas(args.theta)
    kinds = _parse_kinds(args.measure)
    lags = _parse_lags(args.lags)
    (column,) = _read_columns(args.input, args.cols, 1)
    traj = Trajectory(column)
    if lags[-1] >= len(traj):
        raise UsageError(f"--lags: lag {lags[-1]} is not below the length {len(traj)}")
    records = time_avg_sweep(traj, lags, kinds, thetas)
    for rec in records:
        rec["estimate"] = _num(rec["estimate"])
    with _Output(args.output) as out:
        _dump(records, out)
    return EXIT_OK


def _model_from_args(args):
    if args.model is None:
        raise UsageError(f"--model is required; valid: {', '.join(sorted(MODELS))}")
    try:
        return build_model(args.model, _parse_params(args.params))
    except DomainError as exc:
        raise UsageError(str(exc)) from None


def cmd_simulate(args) -> int:
    model = _model_from_args(args)
    if args.n is None or args.n < 1:
        raise UsageError("--n must be a positive integer")
    if args.output is None:
        raise UsageError("--output is required for simulate")
    drawn = sample(model, args.n, args.seed)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if isinstance(drawn, Trajectory):
        writer.writerow(["x"])
        writer.writerows([repr(float(v))] for v in drawn.values)
    else:
        writer.writerow(["x", "y"])
        writer.writerows((repr(float(a)), repr(float(b))) for a, b in zip(drawn.xs, drawn.ys))
    with _Output(args.output) as out:
        out.write(buf.getvalue())
    return EXIT_OK


def cmd_verify(args) -> int:
    model = _model_from_args(args)
    thetas = _parse_thetas(args.theta)
    if args.measure:
        kinds = _parse_kinds(args.measure)
    else:
        kinds = [k for k in MeasureKind]
    n = 10_000 if args.n is None else args.n
    if n < 1 or args.reps < 2:
        raise UsageError("--n must be >= 1 and --reps >= 2")
    work = []
    for kind in sorted(kinds, key=lambda k: k.value):
        for theta in thetas:
            value = analytic_measures(model, theta).get(kind)
            if value is None:
                raise UsageError(f"{model.tag} has no closed form for {kind.value} "
                                 f"at theta={theta!r}")
            work.append((kind, theta, value + args.perturb))
    ok = True
    records = []
    for kind, theta, value in work:
        rep = mc_measure(model, kind, theta, n, args.reps, args.seed, analytic=value)
        if rep.mc_se > 0:
            z, verdict = discrepancy(value, rep)
        else:
            z, verdict = rep.z_score, "pass" if rep.z_score == 0 else "fail"
        ok = ok and verdict == "pass"
        print(f"{kind.value} theta={theta!r}: z={z:.3f} {verdict}", file=sys.stderr)
        records.append({k: _num(v) if isinstance(v, float) else v
                        for k, v in rep.to_dict().items()})
    with _Output(args.output) as out:
        _dump(records, out)
    return EXIT_OK if ok else EXIT_FAIL


# -- entry point -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="codiff",
        description="Estimate, simulate and verify characteristic-function "
                    "dependence measures.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, measure_default: Optional[str] = "scdf", theta_default="1"):
        p.add_argument("--output", help="output path (default: stdout)")
        p.add_argument("--theta", default=theta_default,
                       help="comma-separated nonzero frequencies")
        p.add_argument("--measure", default=measure_default,
                       help="comma-separated kinds: lcf, scdf, acdf_plus, acdf_minus, dynfun")

    p = sub.add_parser("estimate", help="measures from a CSV of paired observations")
    p.add_argument("--input", required=True)
    p.add_argument("--cols", help="column names or indices, e.g. x,y")
    p.add_argument("--ci", type=float, default=0.95, help="confidence level")
    common(p)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("process", help="time-averaged measures of one trajectory")
    p.add_argument("--input", required=True)
    p.add_argument("--cols", help="column name or index")
    p.add_argument("--lags", default="0-5", help="lags, e.g. 0-5 or 0,2,4")
    common(p)
    p.set_defaults(func=cmd_process)

    p = sub.add_parser("simulate", help="draw a catalog model into a CSV file")
    p.add_argument("--model", help=f"one of: {', '.join(sorted(MODELS))}")
    p.add_argument("--params", help="key=value,... (list values joined by ':')")
    p.add_argument("--n", type=int, help="number of pairs or path length")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="closed forms against replicated Monte Carlo")
    p.add_argument("--model", help=f"one of: {', '.join(sorted(MODELS))}")
    p.add_argument("--params", help="key=value,... (list values joined by ':')")
    p.add_argument("--n", type=int, help="sample size per replicate (default 10000)")
    p.add_argument("--reps", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--perturb", type=float, default=0.0, help=argparse.SUPPRESS)
    common(p, measure_default=None)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, DomainError) as exc:
        print(f"codiff {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
