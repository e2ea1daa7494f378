"""Command-line front end.

Exit codes: 0 on success, 1 for bad input, 2 when an internal consistency
check fails.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .analysis import (
    AnalysisConfig,
    member_of_limit,
    multiplicity_of_generators,
    preset_analysis_config,
    run_analyze,
    run_search_stabilization,
)
from .errors import ConfigError, InternalError, UserError
from .parallel import ENV_VAR
from .presets import PRESETS

EXIT_OK = 0
EXIT_USER = 1
EXIT_INTERNAL = 2


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; here 2 is reserved for internal failures
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USER, "%s: error: %s\n" % (self.prog, message))


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(
        prog="greenlim",
        description="Flat limits of colliding point families, multiplicities of limit ideals "
        "and the singularity type of the limiting Green function.",
        epilog="Set %s to run independent multiplicity computations in that many processes." % ENV_VAR,
    )
    ap.add_argument("--version", action="version", version="%(prog)s " + __version__)
    ap.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    a = sub.add_parser("analyze", help="run the full pipeline on a JSON config")
    a.add_argument("--config", required=True, type=Path)
    a.add_argument("--json", action="store_true", help="emit JSON instead of text")

    p = sub.add_parser("preset", help="run a shipped example family")
    p.add_argument("name", choices=sorted(PRESETS))
    p.add_argument("--p-max", type=int, default=None)
    p.add_argument("--json", action="store_true")

    m = sub.add_parser("mult", help="length and multiplicity of an ideal given by generators")
    m.add_argument("--generators", required=True, type=Path, help="JSON {variables, generators} or one generator per line")
    m.add_argument("--json", action="store_true")

    b = sub.add_parser("member", help="test membership of a polynomial in the limit ideal I_(p)")
    b.add_argument("--poly", required=True)
    b.add_argument("--config", required=True, type=Path)
    b.add_argument("--p", required=True, type=int)

    s = sub.add_parser("search", help="find the first p with e(I_(p)) = p^n N")
    s.add_argument("--config", required=True, type=Path)
    s.add_argument("--p-max", required=True, type=int)
    s.add_argument("--json", action="store_true")
    return ap


def _read_generators(path: Path) -> tuple[list[str], int | None]:
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError("%s: cannot read generators (%s)" % (path, exc.strerror)) from None
    stripped = text.lstrip()
    if stripped.startswith("{") or stripped.startswith("["):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError("%s:%d:%d: invalid JSON (%s)" % (path, exc.lineno, exc.colno, exc.msg)) from None
        if isinstance(data, list):
            data = {"generators": data}
        gens = data.get("generators")
        if not isinstance(gens, list) or not gens or not all(isinstance(g, str) for g in gens):
            raise ConfigError("%s: 'generators' must be a nonempty list of strings" % path)
        n = data.get("variables")
        if n is not None and (not isinstance(n, int) or n < 1):
            raise ConfigError("%s: 'variables' must be a positive integer" % path)
        return gens, n
    gens = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.strip().startswith("#")]
    if not gens:
        raise ConfigError("%s: no generators found" % path)
    return gens, None


def _mult(args) -> str:
    gens, n = _read_generators(args.generators)
    r = multiplicity_of_generators(gens, n)
    data = {
        "length": r.length,
        "multiplicity": r.multiplicity,
        "complete_intersection": r.complete_intersection,
        "method": r.method,
        "samuel": list(r.samuel),
        "section_trials": list(r.section_trials),
    }
    if args.json:
        return json.dumps(data, indent=2)
    lines = [
        "length: %d" % r.length,
        "multiplicity: %d" % r.multiplicity,
        "complete intersection: %s" % ("yes" if r.complete_intersection else "no"),
        "method: %s" % r.method,
    ]
    if r.samuel:
        lines.append("Samuel lengths: %s" % ", ".join(map(str, r.samuel)))
    if r.section_trials:
        lines.append("section trials: %s" % ", ".join(map(str, r.section_trials)))
    return "\n".join(lines)


def run(argv: list[str] | None = None) -> tuple[int, str]:
    """Execute a command; returns (exit code, stdout text)."""
    args = build_parser().parse_args(argv)
    if args.verbose:
        logging.basicConfig(level=logging.INFO, format="%(name)s: %(message)s")
    if args.command == "analyze":
        cfg = AnalysisConfig.from_file(args.config)
        if args.json:
            cfg = cfg.with_changes(output="json")
        return EXIT_OK, run_analyze(cfg).render(cfg.output)
    if args.command == "preset":
        if args.p_max is not None and args.p_max < 1:
            raise ConfigError("--p-max must be >= 1")
        cfg = preset_analysis_config(args.name, args.p_max)
        return EXIT_OK, run_analyze(cfg).render("json" if args.json else "text")
    if args.command == "mult":
        return EXIT_OK, _mult(args)
    if args.command == "member":
        cfg = AnalysisConfig.from_file(args.config)
        inside = member_of_limit(args.poly, cfg, args.p)
        return EXIT_OK, "%s in I_(%d): %s" % (args.poly, args.p, "yes" if inside else "no")
    if args.command == "search":
        if args.p_max < 1:
            raise ConfigError("--p-max must be >= 1")
        cfg = AnalysisConfig.from_file(args.config).with_changes(p_max=args.p_max)
        return EXIT_OK, run_search_stabilization(cfg).render("json" if args.json else "text")
    raise ConfigError("unknown command %r" % args.command)  # unreachable with argparse choices


def main(argv: list[str] | None = None) -> int:
    try:
        code, out = run(argv)
    except UserError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_USER
    except InternalError as exc:
        print("internal error (%s): %s" % (type(exc).__name__, exc), file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # a bug, not bad input
        print("internal error (%s): %s" % (type(exc).__name__, exc), file=sys.stderr)
        return EXIT_INTERNAL
    print(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
