"""
Command-line interface.

Every command is turned into a :class:`~bredon.specs.JobSpec` and run by
:func:`bredon.batch.run_job`, on a worker when a job timeout is set. The
JSON report goes to stdout (or ``--output``) with a one-line summary on
stderr. Exit codes: 0 pass, 1 verification failure, 2 input error,
3 budget-indeterminate.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, Optional, Sequence

from bredon import __version__
from bredon.batch import run_batch, run_job
from bredon.config import Budgets
from bredon.exceptions import BredonError, InputError
from bredon.specs import INPUT_KEYS, SUITES, BatchManifest, JobSpec, load_document, parse

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"

BUDGET_FLAGS = (
    ("--max-group-order", "max_group_order", int),
    ("--max-family-classes", "max_family_classes", int),
    ("--max-resolution-rank", "max_resolution_rank", int),
    ("--max-cocycle-candidates", "max_cocycle_candidates", int),
    ("--exhaustive-cocycle-order", "exhaustive_cocycle_order", int),
    ("--max-pointed-objects", "max_pointed_objects", int),
    ("--job-timeout", "job_timeout", float),
    ("--workers", "workers", int),
)


def _add_inputs(parser: argparse.ArgumentParser, *names: str) -> None:
    helps = {
        "group": "battery name (a5, s3, ...) or group JSON (file or inline)",
        "family": "proper, all, trivial, or family JSON",
        "subgroup": "subgroup JSON: {\"generators\": [...]}",
        "normal": "normal subgroup JSON: {\"generators\": [...]}",
        "coefficients": "constant, trivial, sign, regular, or coefficient JSON",
        "pi": "the group acted on",
        "g": "the acting group",
        "action": "battery action (invert, trivial) or action JSON",
        "poset": "poset JSON",
    }
    for name in names:
        parser.add_argument(f"--{name}", dest=name, help=helps[name])


def _add_options(parser: argparse.ArgumentParser, *names: str) -> None:
    if "n_max" in names:
        parser.add_argument("--n-max", dest="n_max", type=int, help="largest degree (default 3)")
    if "skeleton" in names:
        parser.add_argument(
            "--no-skeleton",
            dest="skeleton",
            action="store_false",
            default=None,
            help="one object per subgroup instead of per conjugacy class",
        )
    if "seed" in names:
        parser.add_argument("--seed", type=int, help="seed for randomized orders (default 0)")
    if "regime" in names:
        parser.add_argument(
            "--regime",
            choices=("canonical", "random", "depth_one_first"),
            help="order in which superfluous elements are removed",
        )
    if "direct" in names:
        parser.add_argument(
            "--direct",
            action="store_true",
            default=None,
            help="also decide cd <= 1 of the subgroup poset by resolution",
        )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bredon",
        description="Exact Bredon cohomology of finite groups relative to families of subgroups.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="enable debug logging")
    parser.add_argument("-o", "--output", help="write the JSON report to this file")
    parser.add_argument("-q", "--quiet", action="store_true", help="no summary on stderr")
    parser.add_argument("--id", default="job", help="job id recorded in the report")
    budgets = parser.add_argument_group("budgets (override BREDON_* variables)")
    for flag, dest, kind in BUDGET_FLAGS:
        budgets.add_argument(flag, dest=dest, type=kind)

    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("subgroups", help="subgroups up to conjugacy")
    _add_inputs(p, "group")
    p = commands.add_parser("families", help="all families of subgroups")
    _add_inputs(p, "group")
    p = commands.add_parser("orbitcat", help="the orbit category as JSON")
    _add_inputs(p, "group", "family")
    _add_options(p, "skeleton")
    p = commands.add_parser("cohomology", help="Ext^n(Z, M) over the orbit category")
    _add_inputs(p, "group", "family", "coefficients")
    _add_options(p, "n_max", "skeleton")
    p = commands.add_parser("cd", help="bounded verdicts cd_F(G) <= n")
    _add_inputs(p, "group", "family")
    _add_options(p, "n_max")
    p = commands.add_parser("h1", help="non-abelian H^1(G; pi)")
    _add_inputs(p, "pi", "g", "action")
    p = commands.add_parser("semidirect", help="pi x| G with the family F<G>")
    _add_inputs(p, "pi", "g", "action")
    _add_options(p, "n_max")
    p = commands.add_parser("ereduce", help="E-reduction of a poset")
    _add_inputs(p, "poset", "group", "family")
    _add_options(p, "regime", "seed")
    p = commands.add_parser("crown", help="crown collections of a simple group")
    _add_inputs(p, "group")
    p = commands.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", choices=SUITES)
    _add_inputs(p, "group", "family", "subgroup", "normal", "coefficients")
    _add_options(p, "n_max", "seed", "direct")
    p = commands.add_parser("batch", help="run a manifest of jobs")
    p.add_argument("manifest", help="batch manifest JSON")
    return parser


def _budget_overrides(args: argparse.Namespace) -> Dict[str, Any]:
    return {dest: getattr(args, dest) for _, dest, _ in BUDGET_FLAGS}


def job_from_args(args: argparse.Namespace) -> JobSpec:
    """The :class:`JobSpec` a parsed command line describes.

    Raises:
        InputError: If the resulting job does not validate.
    """
    inputs = {
        key: getattr(args, key) for key in INPUT_KEYS if getattr(args, key, None) is not None
    }
    options = {
        name: getattr(args, name)
        for name in ("n_max", "skeleton", "seed", "regime", "direct")
        if getattr(args, name, None) is not None
    }
    if args.output is not None:
        options["output"] = args.output
    document = {
        "id": args.id,
        "command": args.command,
        "inputs": inputs,
        "options": options,
    }
    if args.command == "verify":
        document["suite"] = args.suite
    return parse(JobSpec, document)


def _emit(report: dict, output: Optional[str]) -> None:
    text = json.dumps(report, sort_keys=True, indent=2)
    if output is None:
        print(text)
        return
    try:
        Path(output).write_text(text + "\n")
    except OSError as exc:
        raise InputError("Cannot write %s: %s", output, exc.strerror)


def _summary(command: str, exit_code: int, report: dict) -> str:
    status = {0: "pass", 1: "fail", 2: "input error", 3: "indeterminate"}[exit_code]
    result = report.get("result", report)
    if command == "cd" and result.get("verdicts"):
        if result.get("value") is not None:
            return f"cd = {result['value']} ({status})"
        return f"cd >= {result['lower_bound']} ({status})"
    if command == "h1" and "class_count" in result:
        return f"|H^1| = {result['class_count']} ({status})"
    if command == "batch":
        return f"{len(report.get('jobs', []))} jobs ({status})"
    return f"{command}: {status}"


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format=LOG_FORMAT,
        stream=sys.stderr,
    )
    try:
        budgets = Budgets.from_env().merged(**_budget_overrides(args))
        if args.command == "batch":
            manifest = parse(BatchManifest, load_document(args.manifest))
            batch = run_batch(manifest, budgets, Path(args.manifest).parent)
            report, exit_code = batch.to_json(), batch.exit_code
        else:
            outcome = run_job(job_from_args(args), budgets)
            report, exit_code = outcome.to_json(), outcome.exit_code
        _emit(report, args.output)
    except BredonError as exc:
        report = {"command": args.command, "exit_code": exc.exit_code, "error": exc.to_json()}
        print(json.dumps(report, sort_keys=True, indent=2))
        exit_code = exc.exit_code
    if not args.quiet:
        print(_summary(args.command, exit_code, report), file=sys.stderr)
    return exit_code


if __name__ == "__main__":
    sys.exit(main())
