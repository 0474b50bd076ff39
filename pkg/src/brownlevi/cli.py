"""Command-line interface.

    brownlevi verify --group gl:n=2,q=4 --ell 5 [--checks ...] [--ell2 p]
                     [--out DIR] [--format json|csv] [--limits FILE] [--timings]
    brownlevi verify --config jobs.json [--out DIR] ...
    brownlevi list levis --group gl:n=4,q=2 --e 2
    brownlevi sweep closures --group gl:n=4,q=2 --ell 3

Exit codes: 0 all asserted checks pass, 1 an asserted check failed,
2 usage/config error, 3 resource limit exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import harness
from .errors import (
    ConfigError,
    GroupSpecError,
    TooLarge,
    TooLargeComplex,
    TooLargeForCharacters,
    TooManySubgroups,
)

_RESOURCE_ERRORS = (TooLarge, TooLargeComplex, TooLargeForCharacters, TooManySubgroups)


def _build_parser():
    parser = argparse.ArgumentParser(prog="brownlevi")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run theorem checks on (group, ell) instances")
    v.add_argument("--group")
    v.add_argument("--ell", type=int)
    v.add_argument("--ell2", type=int)
    v.add_argument("--checks", help="comma-separated: " + ",".join(harness.ALL_CHECKS))
    v.add_argument("--config", help="JSON config file with jobs and limits")
    v.add_argument("--out", help="directory for report files")
    v.add_argument("--format", choices=("json", "csv"), default="json")
    v.add_argument("--limits", help="JSON file overriding resource limits")
    v.add_argument("--timings", action="store_true", help="include wall times in reports")

    ls = sub.add_parser("list", help="enumerations")
    ls_sub = ls.add_subparsers(dest="what", required=True)
    lv = ls_sub.add_parser("levis", help="e-split Levi subgroups up to conjugacy")
    lv.add_argument("--group", required=True)
    lv.add_argument("--e", type=int, required=True)

    sw = sub.add_parser("sweep", help="exhaustive classifications")
    sw_sub = sw.add_subparsers(dest="what", required=True)
    cl = sw_sub.add_parser("closures", help="e-closed / weakly-e-closed classification")
    cl.add_argument("--group", required=True)
    cl.add_argument("--ell", type=int, required=True)
    cl.add_argument("--out")
    return parser


def _load_json(path):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc


def _gl_context(spec):
    group, ctx = harness.build_instance(spec)
    if ctx is None:
        raise ConfigError(f"{spec!r} is not a gl group")
    return ctx


def _cmd_verify(args):
    limits = _load_json(args.limits) if args.limits else {}
    if args.config:
        config = _load_json(args.config)
        config.setdefault("limits", {}).update(limits)
    else:
        if not args.group or args.ell is None:
            raise ConfigError("verify needs --group and --ell (or --config)")
        job = {"group": args.group, "ell": args.ell}
        if args.ell2 is not None:
            job["ell2"] = args.ell2
        if args.checks:
            job["checks"] = [c.strip() for c in args.checks.split(",") if c.strip()]
        config = {"jobs": [job], "limits": limits}
    reports = harness.run_jobs(config)
    payload = harness.emit_json(reports, include_timings=args.timings)
    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        (outdir / "reports.json").write_text(payload)
        if args.format == "csv":
            (outdir / "reports.csv").write_text(harness.emit_csv(reports))
    if args.format == "csv":
        sys.stdout.write(harness.emit_csv(reports))
    else:
        sys.stdout.write(payload)
    for rep in reports:
        for c in rep["checks"]:
            status = "PASS" if c["pass"] else ("FAIL" if c["asserted"] else "info")
            print(f"[{status}] {rep['group']} ell={rep['ell']} {c['name']}", file=sys.stderr)
    return 0 if harness.all_asserted_pass(reports) else 1


def _cmd_list_levis(args):
    ctx = _gl_context(args.group)
    rows = harness.levi_summary(ctx, args.e)
    print(json.dumps(rows, sort_keys=True, indent=2))
    return 0


def _cmd_sweep_closures(args):
    ctx = _gl_context(args.group)
    out = harness.closure_sweep(ctx, args.ell)
    payload = json.dumps(out, sort_keys=True, indent=2) + "\n"
    if args.out:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        Path(args.out).write_text(payload)
    sys.stdout.write(payload)
    return 0


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command == "list":
            return _cmd_list_levis(args)
        return _cmd_sweep_closures(args)
    except (GroupSpecError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except _RESOURCE_ERRORS as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
