"""Command line entry point.

Subcommands:

* ``check <scenario.json>``: run a scenario file.
* ``plan --degree D --genus G [--dplus K]``: plan a projective target
  (omit ``--degree`` to plan an unorientable one).
* ``replay <recipe.json>``: replay a recipe file and print the trace.
* ``verify-local --suite NAME [--grid-step S] [--tol T] [--seed N]``:
  run one numeric verification suite.

Exit codes: 0 when the report passes, 1 when any task fails, 2 for
unparseable input.  JSON reports are deterministic; timing is emitted
only in text mode or with ``--timing``.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import InvalidClassError, ScenarioError, SurgeryError
from .invariants import ImmersionClass
from .scenario import (
    PlanTask,
    Report,
    ReplayTask,
    Scenario,
    SUITES,
    run_scenario,
    run_tasks,
    verify_local,
)
from .surgery import PlanTarget, SurgeryStep


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="steinsurf",
        description="Surface index calculus and local geometry certificates.",
    )
    parser.add_argument(
        "--format", choices=("json", "text"), default="json",
        help="report format (default: json)",
    )
    parser.add_argument(
        "--timing", action="store_true",
        help="include per-task timing in JSON reports",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="run a scenario file")
    p_check.add_argument("scenario", help="path to a scenario JSON file")

    p_plan = sub.add_parser("plan", help="plan a class in the projective plane")
    p_plan.add_argument("--degree", type=int, default=None,
                        help="target degree (omit for an unorientable target)")
    p_plan.add_argument("--genus", type=int, required=True, help="target genus")
    p_plan.add_argument("--dplus", type=int, default=0,
                        help="positive double points (default 0)")

    p_replay = sub.add_parser("replay", help="replay a recipe file")
    p_replay.add_argument("recipe", help="path to a recipe JSON file")

    p_verify = sub.add_parser("verify-local", help="run a verification suite")
    p_verify.add_argument("--suite", required=True, choices=SUITES)
    p_verify.add_argument("--grid-step", type=float, default=None)
    p_verify.add_argument("--tol", type=float, default=None)
    p_verify.add_argument("--seed", type=int, default=None)

    return parser


def _read_json(path: str) -> dict:
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ScenarioError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ScenarioError(f"{path} must contain a JSON object")
    return data


def _load_replay_task(path: str) -> ReplayTask:
    data = _read_json(path)
    if "base" not in data or "steps" not in data:
        raise ScenarioError(f"{path} needs 'base' and 'steps' fields")
    try:
        base = ImmersionClass.from_json(data["base"])
        steps = tuple(SurgeryStep.from_json(s) for s in data["steps"])
        expected = data.get("expected")
        expected = None if expected is None else ImmersionClass.from_json(expected)
    except (InvalidClassError, SurgeryError, KeyError, TypeError, ValueError) as exc:
        raise ScenarioError(f"bad recipe in {path}: {exc}") from exc
    return ReplayTask(base, steps, expected)


def _single_task_report(task) -> Report:
    return run_tasks(Scenario({}, {}, (task,)))


def _dispatch(args: argparse.Namespace) -> Report:
    if args.command == "check":
        return run_scenario(args.scenario)
    if args.command == "plan":
        target = PlanTarget(
            orientable=args.degree is not None,
            genus=args.genus,
            delta_plus=args.dplus,
            degree=args.degree,
        )
        return _single_task_report(PlanTask(target))
    if args.command == "replay":
        return _single_task_report(_load_replay_task(args.recipe))
    return verify_local(args.suite, _verify_params(args))


def _verify_params(args: argparse.Namespace) -> dict:
    params = {}
    if args.grid_step is not None:
        params["grid_step"] = args.grid_step
    if args.tol is not None:
        params["tol"] = args.tol
    if args.seed is not None:
        params["seed"] = args.seed
    return params


def render(report: Report, fmt: str, timing: bool) -> str:
    if fmt == "text":
        return report.to_text()
    return json.dumps(report.to_json(include_timing=timing), indent=2, sort_keys=True)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = _dispatch(args)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(render(report, args.format, args.timing))
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
