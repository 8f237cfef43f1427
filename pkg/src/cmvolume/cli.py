"""Command-line interface: ``cmvolume {dp4, arr, sweep, verify, dump}``.

Exit codes: 0 ok, 1 verification or consistency failure, 2 usage error,
3 published/ring ``c`` mismatch under ``--c-mode paper`` (result still printed),
4 weights on a wall, 5 wrong stability class, 6 empty sweep grid.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import sys
from fractions import Fraction
from typing import Any, Sequence

from .arrangements import (
    NonGenericError,
    StabilityClass,
    StabilityClassError,
    WeightError,
    WeightVector,
    enumerate_fixed_points,
    parse_weights,
    require_log_fano,
    validate_weights,
)
from .blowupring import reduction_trace
from .closedform import ConsistencyError, DP4Input, VolumeReport, dp4_volume, vol_arrangement
from .exactmath import format_rational, parse_rational
from .residues import build_hf
from .verify import run_suite

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_USAGE = 2
EXIT_C_MISMATCH = 3
EXIT_WALL = 4
EXIT_STABILITY = 5
EXIT_EMPTY_GRID = 6

MAX_LISTED_POINTS = 50

ANCHORS = {
    "dp4": [
        "dP4 volume = (c/m)^(m-3) * S",
        "S = fixed-point residue sum over the SL(2) quotient of (P^1)^m symmetrized",
        "c = top self-intersection of the log anticanonical class on the blow-up of the quadric",
        "blow-up relation x^2 = -4hx - 4h^2",
    ],
    "arr1": [
        "Jeffrey-Kirwan localization for (P^1)^m // SL(2)",
        "rank-1 closed form: sum over F+ of sign * (delta_1 - delta_2)^(m-3)",
        "CM scale (n+1)(n+1 - sum d)^n",
    ],
    "arr2": [
        "Jeffrey-Kirwan localization for (P^2)^m // SL(3)",
        "iterated positive residue over the two simple roots",
        "rank-2 closed form: chamber A and chamber B binomial sums",
        "CM scale (n+1)(n+1 - sum d)^n",
    ],
    "verify": [
        "generalized binomial identities",
        "closed form versus residue oracle",
        "blow-up ring recursion",
    ],
    "ring": ["blow-up relation x^2 = -4hx - 4h^2", "pushforward p_*(x) = -1, deg B = 8"],
    "hf": ["fixed-point integrand h_f: exponential slope and root pole orders"],
}


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- rendering


def _scalar(v: Any) -> Any:
    if isinstance(v, Fraction):
        return format_rational(v)
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (list, tuple)):
        return ",".join(str(_scalar(x)) for x in v)
    if isinstance(v, dict):
        return ";".join(f"{k}={_scalar(x)}" for k, x in v.items())
    if v is None:
        return ""
    return str(v)


def _flatten(obj: dict) -> dict:
    return {k: _scalar(v) for k, v in obj.items() if k != "paper_anchors"}


def render(obj: dict, fmt: str, rows_key: str | None = None) -> str:
    """JSON, CSV or an aligned table.  ``rows_key`` names a list of row objects."""
    if fmt == "json":
        return json.dumps(obj, indent=2) + "\n"
    rows = obj[rows_key] if rows_key else [obj]
    flat = [_flatten(r) for r in rows]
    if fmt == "csv":
        buf = io.StringIO()
        header = list(flat[0]) if flat else []
        writer = csv.writer(buf, quoting=csv.QUOTE_NONNUMERIC, lineterminator="\n")
        writer.writerow(header)
        for r in flat:
            writer.writerow([r.get(k, "") for k in header])
        return buf.getvalue()
    lines = []
    if rows_key:
        header = list(flat[0]) if flat else []
        widths = [max(len(h), *(len(r.get(h, "")) for r in flat)) for h in header]
        lines.append("  ".join(h.ljust(wd) for h, wd in zip(header, widths)))
        for r in flat:
            lines.append("  ".join(r.get(h, "").ljust(wd) for h, wd in zip(header, widths)))
        extras = {k: v for k, v in obj.items() if k not in (rows_key, "paper_anchors")}
        lines.extend(f"{k}: {_scalar(v)}" for k, v in extras.items())
    else:
        (row,) = flat
        width = max(len(k) for k in row)
        lines.extend(f"{k.ljust(width)}  {v}" for k, v in row.items())
    return "\n".join(lines) + "\n"


def _report_obj(report: VolumeReport, anchors: Sequence[str]) -> dict:
    out = report.to_json()
    out["paper_anchors"] = list(anchors)
    return out


# ---------------------------------------------------------------- commands


def _weights(args) -> WeightVector:
    if args.d is None:
        raise UsageError("--d is required")
    if args.n is None:
        raise UsageError("--n is required")
    w = WeightVector(args.n, parse_weights(args.d))
    if args.m is not None and args.m != w.m:
        raise UsageError(f"--m {args.m} does not match the {w.m} weights given")
    return w


def cmd_dp4(args, out) -> int:
    if args.m is None:
        raise UsageError("--m is required")
    if args.c is not None:
        c_mode: str | Fraction = parse_rational(args.c)
    else:
        c_mode = args.c_mode
    try:
        report = dp4_volume(DP4Input(args.m, args.n, c_mode))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    for w in report.warnings:
        print(f"warning: {w}", file=sys.stderr)
    out.write(render(_report_obj(report, ANCHORS["dp4"]), args.format))
    if c_mode == "paper" and not report.extra["cAgree"]:
        return EXIT_C_MISMATCH
    return EXIT_OK


def cmd_arr(args, out) -> int:
    w = _weights(args)
    if w.n not in (1, 2):
        raise UsageError(f"--n must be 1 or 2, got {w.n}")
    require_log_fano(w)
    report = vol_arrangement(w, args.method, args.threads)
    out.write(render(_report_obj(report, ANCHORS[f"arr{w.n}"]), args.format))
    return EXIT_OK


def _parse_range(spec: str) -> list[Fraction]:
    parts = spec.split(":")
    if len(parts) == 1:
        return [parse_rational(parts[0])]
    if len(parts) != 3:
        raise UsageError(f"grid entry {spec!r} is not start:stop:step")
    start, stop, step = (parse_rational(p) for p in parts)
    if step <= 0:
        raise UsageError(f"grid step must be positive in {spec!r}")
    vals = []
    x = start
    while x <= stop:
        vals.append(x)
        x += step
    return vals


def parse_grid(text: str, m: int | None) -> list[list[Fraction]]:
    """``"start:stop:step;..."`` with one entry per weight (``stop`` inclusive).

    A single entry is repeated ``m`` times when ``--m`` is given.
    """
    specs = [s.strip() for s in text.split(";")]
    if any(not s for s in specs):
        raise UsageError(f"malformed grid {text!r}")
    axes = [_parse_range(s) for s in specs]
    if len(axes) == 1 and m is not None:
        axes = axes * m
    elif m is not None and m != len(axes):
        raise UsageError(f"--m {m} does not match the {len(axes)} grid entries")
    return axes


def cmd_sweep(args, out) -> int:
    if args.grid is None or args.n is None:
        raise UsageError("sweep needs --n and --grid")
    if args.n not in (1, 2):
        raise UsageError(f"--n must be 1 or 2, got {args.n}")
    axes = parse_grid(args.grid, args.m)
    rows = []
    skipped = {"wall": 0, "stability": 0, "range": 0}
    for point in itertools.product(*axes):
        w = WeightVector(args.n, point)
        try:
            if validate_weights(w) is not StabilityClass.LOG_FANO:
                skipped["stability"] += 1
                continue
        except WeightError:
            skipped["range"] += 1
            continue
        try:
            r = vol_arrangement(w, args.method, args.threads)
        except NonGenericError:
            skipped["wall"] += 1
            continue
        rows.append(
            {
                "weights": r.params["weights"],
                "gitVolume": format_rational(r.git_volume),
                "cmScale": format_rational(r.cm_scale),
                "cmVolume": format_rational(r.cm_volume),
                "census": dict(sorted(r.chamber_census.items())),
            }
        )
    summary = {"n": args.n, "rows": rows, "skipped": skipped}
    if not rows:
        print(f"error: empty effective grid (skipped {skipped})", file=sys.stderr)
        return EXIT_EMPTY_GRID
    summary["paper_anchors"] = ANCHORS[f"arr{args.n}"]
    if args.format != "json":
        summary = {"rows": rows, **{f"skipped_{k}": v for k, v in skipped.items()}}
    out.write(render(summary, args.format, rows_key="rows"))
    return EXIT_OK


def cmd_verify(args, out) -> int:
    try:
        checks = run_suite(args.suite, args.trials, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    failed = [c for c in checks if not c.report_only and not c.passed]
    if args.format == "json":
        obj = {
            "suite": args.suite,
            "seed": args.seed,
            "passed": not failed,
            "checks": [c.to_json() for c in checks],
            "paper_anchors": ANCHORS["verify"],
        }
        out.write(render(obj, "json"))
    elif args.format == "csv":
        obj = {"rows": [c.to_json() for c in checks]}
        out.write(render(obj, "csv", rows_key="rows"))
    else:
        for c in checks:
            out.write(c.line() + "\n")
        out.write(f"{'PASS' if not failed else 'FAIL'} suite {args.suite}\n")
    if failed:
        first = failed[0]
        print(
            f"first counterexample ({first.name}): {json.dumps(first.counterexample)}",
            file=sys.stderr,
        )
        return EXIT_VERIFY
    return EXIT_OK


def cmd_dump(args, out) -> int:
    if args.dump_ring is not None:
        if args.dump_ring < 2:
            raise UsageError("--dump-ring needs n >= 2")
        obj = reduction_trace(args.dump_ring)
        obj["paper_anchors"] = ANCHORS["ring"]
        out.write(json.dumps(obj, indent=2) + "\n")
        return EXIT_OK
    if args.dump_hf:
        w = _weights(args)
        data = [
            {"fixedPoint": list(f), **build_hf(w.n, w.m, f, w).to_json()}
            for f in enumerate_fixed_points(w.n, w.m)
        ]
        obj = {"n": w.n, "m": w.m, "weights": [format_rational(x) for x in w.d], "hf": data}
        obj["paper_anchors"] = ANCHORS["hf"]
        out.write(json.dumps(obj, indent=2) + "\n")
        return EXIT_OK
    raise UsageError("dump needs --dump-ring N or --dump-hf")


# ---------------------------------------------------------------- parser


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _unsigned(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int)
    common.add_argument("--m", type=int)
    common.add_argument("--format", choices=("json", "csv", "table"), default="json")
    common.add_argument("--threads", type=_positive, default=1)

    p = argparse.ArgumentParser(prog="cmvolume", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    dp4 = sub.add_parser("dp4", parents=[common], help="quartic del Pezzo K-moduli volume")
    dp4.add_argument("--c-mode", choices=("paper", "ring"), default="paper")
    dp4.add_argument("--c", help="explicit rational value of c (overrides --c-mode)")

    arr = sub.add_parser("arr", parents=[common], help="hyperplane arrangement volume")
    arr.add_argument("--d", help="weights d1,...,dm as p/q or exact decimals")
    arr.add_argument("--method", choices=("closed", "residue", "both"), default="closed")

    sw = sub.add_parser("sweep", parents=[common], help="volumes over a weight grid")
    sw.add_argument("--grid", help="start:stop:step per weight, separated by ';'")
    sw.add_argument("--method", choices=("closed", "residue", "both"), default="closed")

    ver = sub.add_parser("verify", parents=[common], help="run a verification suite")
    ver.add_argument(
        "--suite", choices=("identities", "arr1", "arr2", "dp4", "ring", "all"), default="all"
    )
    ver.add_argument("--seed", type=_unsigned, default=0)
    ver.add_argument("--trials", type=_positive)

    dump = sub.add_parser("dump", parents=[common], help="inspection dumps")
    dump.add_argument("--dump-ring", type=int, metavar="N")
    dump.add_argument("--dump-hf", action="store_true")
    dump.add_argument("--d")
    return p


COMMANDS = {
    "dp4": cmd_dp4,
    "arr": cmd_arr,
    "sweep": cmd_sweep,
    "verify": cmd_verify,
    "dump": cmd_dump,
}


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args, out)
    except (UsageError, WeightError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except StabilityClassError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_STABILITY
    except NonGenericError as exc:
        print(f"error: {exc}", file=sys.stderr)
        pts = exc.points
        for f in pts[:MAX_LISTED_POINTS]:
            print("  fixed point " + ",".join(map(str, f)), file=sys.stderr)
        if len(pts) > MAX_LISTED_POINTS:
            print(f"  ... and {len(pts) - MAX_LISTED_POINTS} more", file=sys.stderr)
        return EXIT_WALL
    except ConsistencyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
