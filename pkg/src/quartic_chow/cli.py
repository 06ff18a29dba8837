"""Command-line front end: ``quartic-chow verify | strata | series | cache``.

Exit status: 0 when every check passes, 1 when some check fails, 2 on a
usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import shutil
import sys
from typing import Sequence

from . import kirwan
from .errors import ChowError, ConfigurationError
from .pipelines import (
    Workspace,
    all_passed,
    discover_scenes,
    emit_report,
    full_pipeline_order,
    is_fresh,
    run_all,
    run_target,
    run_targets,
    unknown_target_message,
)
from .scene import format_stratum

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

# space -> (target exporting it, artifact name, description)
SERIES_SPACES: dict[str, tuple[str, str, str]] = {
    "git": ("strata-series", "Pgit", "Poincaré series of the GIT stack"),
    "k": ("poincare-all", "PKser", "Poincaré series of the K-moduli stack"),
    "hat": ("poincare-all", "Phat", "Poincaré polynomial of the resolved stack"),
    "hacking": ("poincare-all", "PH", "Poincaré polynomial of the Hacking stack"),
    "z2": ("poincare-all", "PZ2", "Poincaré polynomial of Z2"),
    "y8": ("poincare-all", "Y8hat", "Poincaré polynomial of the blown-up octic quotient"),
    "ic-git": ("ic-all", "IPgit", "intersection Poincaré polynomial of the GIT quotient"),
    "ic-k": ("ic-all", "IPK", "intersection Poincaré polynomial of the K-moduli space"),
    "ic-y8": ("ic-all", "IPY8", "intersection Poincaré polynomial of the octic quotient"),
}


class UsageError(Exception):
    """Raised by the argument parser instead of exiting."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(f"{self.prog}: error: {message}")


def build_parser(targets: Sequence[str]) -> argparse.ArgumentParser:
    epilog = "targets (pipeline order): " + ", ".join(targets)
    parser = _Parser(
        prog="quartic-chow",
        description="Exact verification of Chow rings and Poincaré series of moduli of plane quartics.",
        epilog=epilog,
    )
    parser.add_argument("--cache-dir", help="directory for artifacts and Gröbner bases (default: $QUARTIC_CHOW_CACHE or ~/.cache/quartic-chow)")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="run verification targets", epilog=epilog)
    v.add_argument("targets", nargs="*", metavar="TARGET", help="targets to run")
    v.add_argument("--all", action="store_true", help="run every target in pipeline order plus the coverage ledger")
    v.add_argument("--format", choices=("text", "json"), default="text")
    v.add_argument("--jobs", type=int, default=1, help="maximum number of targets run concurrently")
    v.add_argument("--timing", action="store_true", help="include timings (makes the report non-deterministic)")

    s = sub.add_parser("strata", help="print the unstable strata of a space of forms")
    s.add_argument("--degree", type=int, required=True)
    s.add_argument("--forms", choices=("ternary", "binary"), default="ternary")
    s.add_argument("--order", type=int, default=0, help="also print power-series expansions up to this order")
    s.add_argument("--format", choices=("text", "json"), default="text")

    r = sub.add_parser("series", help="print a Poincaré or intersection Poincaré series")
    r.add_argument("--space", choices=sorted(SERIES_SPACES), required=True)
    r.add_argument("--order", type=int, default=0, help="also print the expansion up to this order")
    r.add_argument("--format", choices=("text", "json"), default="text")

    c = sub.add_parser("cache", help="inspect or clear the cache directory")
    c.add_argument("action", choices=("list", "clear"))
    return parser


def _cmd_verify(args: argparse.Namespace, ws: Workspace, scenes: dict) -> int:
    if args.jobs < 1:
        raise UsageError("--jobs must be at least 1")
    if args.all and args.targets:
        raise UsageError("give either --all or target names, not both")
    if not args.all and not args.targets:
        raise UsageError("give target names or --all")
    for name in args.targets:
        if name not in scenes:
            raise ConfigurationError(unknown_target_message(name, scenes))
    if args.all:
        certs = run_all(workspace=ws, jobs=args.jobs, scenes=scenes)
    else:
        certs = run_targets(args.targets, workspace=ws, scenes=scenes, jobs=args.jobs)
    sys.stdout.write(emit_report(certs, args.format, timing=args.timing))
    return EXIT_OK if all_passed(certs) else EXIT_FAIL


def _expansion(series: object, order: int) -> list[str]:
    return [str(c) for c in series.expand(order)]  # type: ignore[attr-defined]


def _cmd_strata(args: argparse.Namespace) -> int:
    if args.degree < 1:
        raise UsageError("--degree must be positive")
    W = kirwan.WeightSystem.ternary(args.degree) if args.forms == "ternary" else kirwan.WeightSystem.binary(args.degree)
    strata = kirwan.enumerate_strata(W)
    if args.format == "json":
        rows = []
        for s in strata:
            row = {
                "support": list(s.support),
                "stabilizer": s.group,
                "contribution": str(s.contribution),
                "dim_y": s.dim_y,
                "codim": s.codim,
            }
            if args.order:
                row["expansion"] = _expansion(s.contribution, args.order)
            rows.append(row)
        sys.stdout.write(json.dumps({"forms": args.forms, "degree": args.degree, "strata": rows}, indent=2, ensure_ascii=False) + "\n")
        return EXIT_OK
    print(f"{len(strata)} unstable strata of {args.forms} forms of degree {args.degree}")
    print("support | stabilizer | contribution | dim Y^ss | codim")
    for s in strata:
        print(format_stratum(s))
        if args.order:
            print("    expansion: " + ", ".join(_expansion(s.contribution, args.order)))
    return EXIT_OK


def _cmd_series(args: argparse.Namespace, ws: Workspace, scenes: dict) -> int:
    target, artifact, description = SERIES_SPACES[args.space]
    store = ws.store
    if not store.path(target, artifact).exists() or not is_fresh(target, scenes, ws):
        run_target(target, workspace=ws, scenes=scenes)
    value = store.read(target, artifact)
    if args.format == "json":
        doc = {"space": args.space, "description": description, "series": str(value)}
        if args.order:
            doc["expansion"] = _expansion(value, args.order)
        sys.stdout.write(json.dumps(doc, indent=2, ensure_ascii=False) + "\n")
        return EXIT_OK
    print(f"{description}: {value}")
    if args.order:
        print("expansion: " + ", ".join(_expansion(value, args.order)))
    return EXIT_OK


def _cmd_cache(args: argparse.Namespace, ws: Workspace) -> int:
    cache = ws.cache
    if args.action == "list":
        print(f"cache directory: {ws.root}")
        print(f"groebner bases: {len(cache.entries())}")
        art = ws.root / "artifacts"
        targets = sorted(p.name for p in art.iterdir() if p.is_dir()) if art.exists() else []
        print(f"targets with artifacts: {', '.join(targets) if targets else '(none)'}")
        return EXIT_OK
    removed = cache.clear()
    art = ws.root / "artifacts"
    if art.exists():
        shutil.rmtree(art)
    print(f"removed {removed} cached bases and all artifacts from {ws.root}")
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    """Entry point; returns the exit status."""
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        scenes = discover_scenes()
        targets = full_pipeline_order(scenes)
    except ChowError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    parser = build_parser(targets)
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(parser.format_usage().rstrip(), file=sys.stderr)
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    ws = Workspace.at(args.cache_dir)
    try:
        if args.command == "verify":
            return _cmd_verify(args, ws, scenes)
        if args.command == "strata":
            return _cmd_strata(args)
        if args.command == "series":
            return _cmd_series(args, ws, scenes)
        return _cmd_cache(args, ws)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ChowError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
