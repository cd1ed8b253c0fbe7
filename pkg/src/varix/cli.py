"""Command-line interface: ``varix {compute,profile,approx,verify,mc,tail}``.

Reports go to standard output, diagnostics to standard error.  Exit status
is 2 for usage errors, 1 for a failed verification or an out-of-tolerance
Monte Carlo report, 0 otherwise.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

from .crossings import CrossingKind, crossing_profile, profile_integral, read_density_tsv
from .exceptions import ParseError, VarixError
from .paths import from_samples
from .stochastic import (
    KilledBMConfig,
    closed_form_eutv,
    mc_crossing_tail,
    mc_expected_utv_multi,
    read_config,
    upcrossing_law,
)
from .variation import optimal_approximation, truncated_variations
from .verify import DEFAULT_CS, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def parse_path_csv(text):
    """Parse a one-column (``value``) or two-column (``t,value``) CSV path."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    values, times = [], []
    ncols = None
    for lineno, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        row = [cell.strip() for cell in row]
        if not row or all(not cell for cell in row):
            continue
        try:
            nums = [float(cell) for cell in row]
        except ValueError:
            if lineno == 1 and not values:
                ncols = len(row)
                continue
            raise ParseError(lineno) from None
        if len(nums) not in (1, 2) or (ncols is not None and len(nums) != ncols):
            raise ParseError(lineno, f"expected {ncols or '1 or 2'} columns, got {len(nums)}")
        ncols = len(nums)
        if ncols == 2:
            times.append(nums[0])
        values.append(nums[-1])
    return from_samples(values, times if ncols == 2 else None)


def _num(x):
    if x is None:
        return "null"
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            return "null"
        return format(x, ".17g")
    if isinstance(x, (list, tuple)):
        return "[" + ", ".join(_num(v) for v in x) + "]"
    if isinstance(x, dict):
        return dumps(x)
    return json.dumps(x)


def dumps(record):
    """JSON object with floats at 17 significant digits."""
    return "{" + ", ".join(f"{json.dumps(str(k))}: {_num(v)}" for k, v in record.items()) + "}"


def _read_input(name):
    if name in (None, "-"):
        return sys.stdin.read()
    with open(name, encoding="utf-8") as fh:
        return fh.read()


def _float_list(text):
    try:
        return [float(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _positive(text):
    val = float(text)
    if not val > 0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {text}")
    return val


def _nonneg(text):
    val = float(text)
    if not val >= 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text}")
    return val


def build_parser():
    parser = argparse.ArgumentParser(prog="varix", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("compute", help="truncated variations of a path")
    p.add_argument("--c", type=_nonneg, required=True)
    p.add_argument("--input", default="-")
    p.add_argument("--format", choices=("json", "tsv"), default="json")

    p = sub.add_parser("profile", help="crossing-count profile of a path")
    p.add_argument("--c", type=_nonneg, required=True)
    p.add_argument("--kind", choices=[k.value for k in CrossingKind], default="both")
    p.add_argument("--input", default="-")
    p.add_argument("--density", help="TSV density file; reports the weighted integral")
    p.add_argument("--format", choices=("json", "tsv"), default="tsv")

    p = sub.add_parser("approx", help="minimal-variation c/2-approximation as CSV")
    p.add_argument("--c", type=_positive, required=True)
    p.add_argument("--input", default="-")

    p = sub.add_parser("verify", help="randomized identity checks")
    p.add_argument("--paths", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--c-list", type=_float_list, default=list(DEFAULT_CS))

    for name, helptext in (("mc", "Monte Carlo E[UTV] vs closed form"),
                           ("tail", "Monte Carlo upcrossing tail vs closed form")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--config", help="flat key = value experiment file")
        p.add_argument("--mu", type=float)
        p.add_argument("--v", type=_positive)
        p.add_argument("--c", type=_positive)
        p.add_argument("--dt", type=_positive)
        p.add_argument("--paths", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--z-max", type=_positive, default=4.0)
        if name == "mc":
            p.add_argument("--c-list", type=_float_list)
            p.add_argument("--rel-tol", type=_nonneg, default=0.03,
                           help="relative discretization allowance (default 0.03)")
        else:
            p.add_argument("--y", type=float)
            p.add_argument("--n-max", type=int)
            p.add_argument("--ratio-tol", type=_nonneg, default=0.02)
    return parser


def _config(args):
    cfg = read_config(_read_input(args.config)) if args.config else KilledBMConfig()
    changes = {}
    for attr, key in (("mu", "mu"), ("v", "v"), ("c", "c"), ("dt", "dt"),
                      ("paths", "n_paths"), ("seed", "seed"),
                      ("y", "y"), ("n_max", "n_max")):
        val = getattr(args, attr, None)
        if val is not None:
            changes[key] = val
    return cfg.replace(**changes) if changes else cfg


def cmd_compute(args, out):
    tv = truncated_variations(parse_path_csv(_read_input(args.input)), args.c)
    if args.format == "json":
        out.write(dumps(tv.as_dict()) + "\n")
    else:
        out.write("c\tttv\tutv\tdtv\n")
        out.write("\t".join(format(x, ".17g") for x in (tv.c, tv.ttv, tv.utv, tv.dtv)) + "\n")
    return EXIT_OK


def cmd_profile(args, out):
    path = parse_path_csv(_read_input(args.input))
    prof = crossing_profile(path, args.c, args.kind)
    density = read_density_tsv(_read_input(args.density)) if args.density else None
    if args.format == "tsv":
        out.write(prof.to_tsv())
        if density is not None:
            print(f"weighted integral: {profile_integral(prof, density)!r}", file=sys.stderr)
    else:
        record = {"kind": prof.kind.value, "c": prof.c,
                  "breakpoints": prof.breakpoints.tolist(),
                  "counts": [int(x) for x in prof.counts],
                  "integral": profile_integral(prof)}
        if density is not None:
            record["weighted_integral"] = profile_integral(prof, density)
        out.write(dumps(record) + "\n")
    return EXIT_OK


def cmd_approx(args, out):
    path = parse_path_csv(_read_input(args.input))
    approx = optimal_approximation(path, args.c)
    if approx.times is None:
        out.write("value\n")
        out.writelines(f"{x!r}\n" for x in approx.values.tolist())
    else:
        out.write("t,value\n")
        out.writelines(f"{t!r},{x!r}\n" for t, x in zip(approx.times.tolist(), approx.values.tolist()))
    return EXIT_OK


def cmd_verify(args, out):
    if args.paths < 1:
        raise VarixError("--paths must be positive")
    if not args.c_list or any(c <= 0 for c in args.c_list):
        raise VarixError("--c-list must hold positive levels")
    report = run_suite(args.paths, args.seed, args.c_list)
    out.write(report.summary())
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_mc(args, out):
    cfg = _config(args)
    cs = args.c_list or [cfg.c]
    status = EXIT_OK
    for c, est in zip(cs, mc_expected_utv_multi(cfg, cs)):
        record = {"mu": cfg.mu, "v": cfg.v, "c": c, "dt": cfg.dt, "seed": cfg.seed, **est.as_record()}
        out.write(dumps(record) + "\n")
        if abs(est.z_score) > args.z_max and abs(est.mean - est.target) > args.rel_tol * est.target:
            status = EXIT_FAIL
    return status


def cmd_tail(args, out):
    cfg = _config(args)
    tail = mc_crossing_tail(cfg)
    law = upcrossing_law(cfg.mu, cfg.v, cfg.c, cfg.y)
    n = cfg.n_paths
    p1 = float(tail[0])
    se1 = math.sqrt(max(p1 * (1 - p1), 1e-300) / n)
    ratios = [float(b / a) if a > 0 else None for a, b in zip(tail[:-1], tail[1:])]
    record = {"mu": cfg.mu, "v": cfg.v, "c": cfg.c, "y": cfg.y, "dt": cfg.dt, "seed": cfg.seed,
              "n": n, "tail": [float(x) for x in tail],
              "target_tail": [law.p_once * law.ratio ** k for k in range(len(tail))],
              "ratio": ratios[0], "target_ratio": law.ratio,
              "mean": p1, "std_error": se1, "target": law.p_once,
              "z_score": (p1 - law.p_once) / se1}
    out.write(dumps(record) + "\n")
    ratio_bad = ratios[0] is None or abs(ratios[0] - law.ratio) > args.ratio_tol
    return EXIT_FAIL if abs(record["z_score"]) > args.z_max or ratio_bad else EXIT_OK


COMMANDS = {"compute": cmd_compute, "profile": cmd_profile, "approx": cmd_approx,
            "verify": cmd_verify, "mc": cmd_mc, "tail": cmd_tail}


def run(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return COMMANDS[args.subcommand](args, out)
    except (VarixError, OSError) as exc:
        print(f"varix {args.subcommand}: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
