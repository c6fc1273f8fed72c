"""Scenario files: named surfaces and ambients plus a task list.

A scenario is a JSON document with a versioned schema:

    {
      "schema": 1,
      "surfaces": {"sphere": {...immersion class...}},
      "ambients": {"cp2": {"kind": "ProjectivePlane", "stein": false,
                           "kaehler_b2plus_gt1": false}},
      "tasks": [
        {"task": "check", "surface": "sphere", "ambient": "cp2",
         "variant": "embedded"},
        {"task": "plan", "target": {"orientable": true, "genus": 3,
         "degree": 1}},
        {"task": "replay", "recipe": {"base": {...}, "steps": [...]}},
        {"task": "verify-local", "suite": "windings"}
      ]
    }

Structural problems (bad schema version, unresolved names, malformed
classes) raise ScenarioError; failures discovered while running a task
are recorded in the report and fail that task.  Reports are
deterministic: identical scenarios produce byte-identical JSON, with
wall-clock timing only in the text emitter or behind an explicit flag.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from .certificates import (
    Certificate,
    RULE_FLOW,
    RULE_WINDING,
    Witness,
)
from .errors import (
    GeometryError,
    InfeasibleTargetError,
    InvalidClassError,
    NumericalError,
    ScenarioError,
    SurgeryError,
)
from .invariants import (
    ADJUNCTION_VARIANTS,
    AmbientDescriptor,
    ImmersionClass,
    check_adjunction,
    lai,
    stein_condition,
    validate,
    verdict,
)
from .localgeo import (
    MODEL_DOUBLE_POINT,
    MODEL_GRAPH_ELLIPTIC,
    MODEL_GRAPH_HYPERBOLIC,
    MODEL_SIGMA_MINUS,
    MODEL_SIGMA_PLUS,
    MODEL_SPECIAL_HYPERBOLIC,
    MODEL_WEINSTEIN,
    Box4,
    PointC2,
    conjugate_graph,
    double_point_scene,
    exhaustion_certificate,
    flow_to_surface,
    intersection_sign,
    locate_complex_points,
    min_abs_complex_det,
    model_field,
    model_patch,
    psh_certificate,
    special_hyperbolic_scene,
    weinstein_double_point_planes,
    winding_index,
)
from .surgery import PlanTarget, SurgeryStep, plan_cp2, replay_trace

SCHEMA_VERSION = 1
DEFAULT_SEED = 1729

TASK_CHECK = "check"
TASK_PLAN = "plan"
TASK_REPLAY = "replay"
TASK_VERIFY_LOCAL = "verify-local"

SUITE_PSH_MODELS = "psh_models"
SUITE_WINDINGS = "windings"
SUITE_SIGMA_HANDLES = "sigma_handles"
SUITE_WEINSTEIN = "weinstein"
SUITE_FLOW = "flow"
SUITE_EXHAUSTION = "exhaustion"
SUITES = (
    SUITE_PSH_MODELS,
    SUITE_WINDINGS,
    SUITE_SIGMA_HANDLES,
    SUITE_WEINSTEIN,
    SUITE_FLOW,
    SUITE_EXHAUSTION,
)

_TASK_ERRORS = (
    InvalidClassError,
    InfeasibleTargetError,
    SurgeryError,
    GeometryError,
    NumericalError,
)


@dataclass(frozen=True)
class CheckTask:
    surface: str
    ambient: str | None = None
    variant: str | None = None
    class_nonzero: bool = True


@dataclass(frozen=True)
class PlanTask:
    target: PlanTarget


@dataclass(frozen=True)
class ReplayTask:
    base: ImmersionClass
    steps: tuple[SurgeryStep, ...]
    expected: ImmersionClass | None = None


@dataclass(frozen=True)
class VerifyLocalTask:
    suite: str
    params: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Scenario:
    surfaces: dict[str, ImmersionClass]
    ambients: dict[str, AmbientDescriptor]
    tasks: tuple[Any, ...]


@dataclass(frozen=True)
class TaskResult:
    label: str
    passed: bool
    details: dict
    seconds: float

    def to_json(self, include_timing: bool = False) -> dict:
        out = {"label": self.label, "pass": self.passed, "details": self.details}
        if include_timing:
            out["seconds"] = self.seconds
        return out


@dataclass(frozen=True)
class Report:
    results: tuple[TaskResult, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_json(self, include_timing: bool = False) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "pass": self.passed,
            "tasks": [r.to_json(include_timing) for r in self.results],
        }

    def to_text(self) -> str:
        lines = []
        for r in self.results:
            status = "PASS" if r.passed else "FAIL"
            lines.append(f"[{status}] {r.label} ({r.seconds:.3f}s)")
            err = r.details.get("error")
            if err:
                lines.append(f"    error: {err}")
        lines.append(f"overall: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ScenarioError(message)


def _parse_named(section: Any, parser, what: str) -> dict:
    _require(isinstance(section, dict), f"{what} section must be an object")
    out = {}
    for name, payload in section.items():
        try:
            out[name] = parser(payload)
        except (InvalidClassError, KeyError, TypeError, ValueError) as exc:
            raise ScenarioError(f"bad {what} entry {name!r}: {exc}") from exc
    return out


def _parse_plan_target(data: Any) -> PlanTarget:
    _require(isinstance(data, dict), "plan target must be an object")
    unknown = set(data) - {"orientable", "genus", "delta_plus", "degree"}
    _require(not unknown, f"unknown plan target fields: {sorted(unknown)}")
    _require("orientable" in data and "genus" in data, "plan target needs orientable and genus")
    return PlanTarget(
        orientable=data["orientable"],
        genus=data["genus"],
        delta_plus=data.get("delta_plus", 0),
        degree=data.get("degree"),
    )


def _parse_task(index: int, data: Any, surfaces: dict, ambients: dict):
    _require(isinstance(data, dict), f"task {index}: must be an object")
    kind = data.get("task")
    if kind == TASK_CHECK:
        name = data.get("surface")
        _require(name in surfaces, f"task {index}: unknown surface {name!r}")
        ambient = data.get("ambient")
        _require(
            ambient is None or ambient in ambients,
            f"task {index}: unknown ambient {ambient!r}",
        )
        variant = data.get("variant")
        _require(
            variant is None or variant in ADJUNCTION_VARIANTS,
            f"task {index}: unknown adjunction variant {variant!r}",
        )
        return CheckTask(name, ambient, variant, bool(data.get("class_nonzero", True)))
    if kind == TASK_PLAN:
        return PlanTask(_parse_plan_target(data.get("target")))
    if kind == TASK_REPLAY:
        recipe = data.get("recipe")
        _require(isinstance(recipe, dict), f"task {index}: replay needs a recipe object")
        try:
            base = ImmersionClass.from_json(recipe["base"])
            steps = tuple(SurgeryStep.from_json(s) for s in recipe["steps"])
            expected = recipe.get("expected")
            expected = None if expected is None else ImmersionClass.from_json(expected)
        except (InvalidClassError, SurgeryError, KeyError, TypeError, ValueError) as exc:
            raise ScenarioError(f"task {index}: bad recipe: {exc}") from exc
        return ReplayTask(base, steps, expected)
    if kind == TASK_VERIFY_LOCAL:
        suite = data.get("suite")
        _require(suite in SUITES, f"task {index}: unknown suite {suite!r}")
        params = data.get("params", {})
        _require(isinstance(params, dict), f"task {index}: params must be an object")
        return VerifyLocalTask(suite, dict(params))
    raise ScenarioError(f"task {index}: unknown task kind {kind!r}")


def load_scenario(source: str | Path | dict) -> Scenario:
    """Parse a scenario from a path or an already-decoded JSON object."""
    if isinstance(source, (str, Path)):
        try:
            data = json.loads(Path(source).read_text())
        except OSError as exc:
            raise ScenarioError(f"cannot read scenario file: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ScenarioError(f"scenario is not valid JSON: {exc}") from exc
    else:
        data = source
    _require(isinstance(data, dict), "scenario must be a JSON object")
    _require(
        data.get("schema") == SCHEMA_VERSION,
        f"unsupported scenario schema {data.get('schema')!r}, expected {SCHEMA_VERSION}",
    )
    surfaces = _parse_named(data.get("surfaces", {}), ImmersionClass.from_json, "surface")
    ambients = _parse_named(data.get("ambients", {}), AmbientDescriptor.from_json, "ambient")
    raw_tasks = data.get("tasks", [])
    _require(isinstance(raw_tasks, list), "tasks must be a list")
    tasks = tuple(
        _parse_task(i, t, surfaces, ambients) for i, t in enumerate(raw_tasks)
    )
    return Scenario(surfaces, ambients, tasks)


# ---------------------------------------------------------------------------
# Task execution
# ---------------------------------------------------------------------------


def _run_check(task: CheckTask, scenario: Scenario) -> tuple[bool, dict]:
    imm = scenario.surfaces[task.surface]
    details: dict = {"surface": task.surface}
    cert_valid = validate(imm)
    details["valid"] = cert_valid.to_json()
    passed = cert_valid.passed
    if passed:
        report = lai(imm)
        details["index"] = {
            "total": report.total,
            "positive": report.positive,
            "negative": report.negative,
        }
    if task.variant is not None:
        details["variant"] = task.variant
        cert = check_adjunction(imm, task.variant)
    else:
        cert = stein_condition(imm)
    details["certificate"] = cert.to_json()
    passed = passed and cert.passed
    if task.ambient is not None:
        details["ambient"] = task.ambient
        v = verdict(imm, scenario.ambients[task.ambient], task.class_nonzero)
        details["verdict"] = v.to_json()
    return passed, details


def _run_plan(task: PlanTask) -> tuple[bool, dict]:
    t = task.target
    details: dict = {
        "target": {
            "orientable": t.orientable,
            "genus": t.genus,
            "delta_plus": t.delta_plus,
            "degree": t.degree,
        }
    }
    try:
        recipe = plan_cp2(t)
    except InfeasibleTargetError as exc:
        details["error"] = str(exc)
        details["rule"] = exc.rule
        return False, details
    details["recipe"] = recipe.to_json()
    cert = stein_condition(recipe.expected)
    details["stein"] = cert.to_json()
    return cert.passed, details


def _run_replay(task: ReplayTask) -> tuple[bool, dict]:
    details: dict = {}
    try:
        result, trace = replay_trace(task.base, task.steps)
    except SurgeryError as exc:
        details["error"] = str(exc)
        if exc.position is not None:
            details["position"] = exc.position
        return False, details
    details["result"] = result.to_json()
    details["trace"] = trace
    if task.expected is not None:
        match = result == task.expected
        details["expected_match"] = match
        return match, details
    return True, details


# ---------------------------------------------------------------------------
# verify-local suites
# ---------------------------------------------------------------------------


def _check_entry(name: str, cert: Certificate) -> dict:
    return {"name": name, "pass": cert.passed, "certificate": cert.to_json()}


def _suite_psh_models(params: dict) -> list[dict]:
    step = float(params.get("grid_step", 0.05))
    box = Box4.symmetric(1.0)
    checks = []
    for kind in (MODEL_SPECIAL_HYPERBOLIC, MODEL_DOUBLE_POINT):
        for jets in (True, False):
            default_tol = 1e-9 if jets else 1e-5
            tol = float(params.get("tol", default_tol))
            fld = model_field(kind, with_jets=jets)
            cert = psh_certificate(fld, box, step, tol)
            mode = "closed" if jets else "fd"
            checks.append(_check_entry(f"{kind}-{mode}", cert))
    return checks


_WINDING_TARGETS = (
    (MODEL_GRAPH_ELLIPTIC, 1),
    (MODEL_GRAPH_HYPERBOLIC, -1),
)


def _suite_windings(params: dict) -> list[dict]:
    radius = float(params.get("radius", 0.5))
    checks = []
    for kind, expected in _WINDING_TARGETS:
        patch = model_patch(kind)
        got = winding_index(patch, (0.0, 0.0), radius)
        cert = Certificate(
            got == expected, RULE_WINDING, (Witness(patch.name, got),)
        )
        checks.append(_check_entry(f"{kind}:{expected}", cert))
    cubic = conjugate_graph(3)
    got = winding_index(cubic, (0.0, 0.0), radius)
    cert = Certificate(got == -2, RULE_WINDING, (Witness(cubic.name, got),))
    checks.append(_check_entry(f"{cubic.name}:-2", cert))
    return checks


def _located_to_json(points) -> list[dict]:
    return [p.to_json() for p in points]


def _suite_sigma_handles(params: dict) -> list[dict]:
    eps = float(params.get("epsilon", 0.1))
    step = float(params.get("grid_step", 0.1))
    tol = float(params.get("tol", 1e-4))
    checks = []

    minus = model_patch(MODEL_SIGMA_MINUS, epsilon=eps)
    points = locate_complex_points(minus, grid_step=step)
    r = (abs(eps) / 2.0) ** 0.5
    targets = [
        np.array([sx * r, sx * r, su * r, -su * r])
        for sx in (1, -1)
        for su in (1, -1)
    ]
    ok = len(points) == 4 and all(p.index == -1 for p in points)
    if ok:
        for p in points:
            coords = np.array(p.point.reals)
            ok = ok and min(
                float(np.linalg.norm(coords - t)) for t in targets
            ) < tol
    cert = Certificate(
        ok, RULE_WINDING, tuple(Witness(p.to_json(), p.index) for p in points)
    )
    checks.append({"name": "sigma-minus-four-points", "pass": ok,
                   "certificate": cert.to_json(),
                   "points": _located_to_json(points)})

    plus = model_patch(MODEL_SIGMA_PLUS, epsilon=eps)
    plus_points = locate_complex_points(plus, grid_step=step)
    floor = min_abs_complex_det(plus)
    ok = not plus_points and floor > 0
    cert = Certificate(ok, RULE_WINDING, (Witness("min_abs_det", floor),))
    checks.append(_check_entry("sigma-plus-totally-real", cert))
    return checks


def _suite_weinstein(params: dict) -> list[dict]:
    step = float(params.get("grid_step", 0.1))
    checks = []
    patch = model_patch(MODEL_WEINSTEIN)
    points = locate_complex_points(patch, grid_step=step)
    floor = min_abs_complex_det(patch)
    ok = not points and floor > 0
    cert = Certificate(ok, RULE_WINDING, (Witness("min_abs_det", floor),))
    checks.append(_check_entry("weinstein-totally-real", cert))

    north, south = weinstein_double_point_planes()
    sign = intersection_sign(north, south)
    cert = Certificate(sign == 1, RULE_FLOW, (Witness("intersection_sign", sign),))
    checks.append(_check_entry("weinstein-positive-double-point", cert))
    return checks


def _sample_sublevel(field, rng, level: float, half_width: float):
    for _ in range(100000):
        coords = rng.uniform(-half_width, half_width, size=4)
        p = PointC2.from_reals(*coords)
        if float(field.value_at(p)) < level:
            return p
    raise NumericalError("could not sample a start point below the level")


def _suite_flow(params: dict) -> list[dict]:
    seed = int(params.get("seed", DEFAULT_SEED))
    n = int(params.get("n", 25))
    level = float(params.get("level", 0.01))
    checks = []
    for kind in (MODEL_SPECIAL_HYPERBOLIC, MODEL_DOUBLE_POINT):
        fld = model_field(kind)
        rng = np.random.default_rng(seed)
        worst = 0.0
        ok = True
        for _ in range(n):
            start = _sample_sublevel(fld, rng, level, 0.6)
            res = flow_to_surface(fld, start)
            monotone = all(b < a for a, b in zip(res.values, res.values[1:]))
            ok = ok and res.converged and monotone
            worst = max(worst, res.final_value)
        cert = Certificate(
            ok, RULE_FLOW,
            (Witness("max_final_value", worst), Witness("n_starts", n)),
        )
        checks.append(_check_entry(f"{kind}-retraction", cert))
    return checks


def _suite_exhaustion(params: dict) -> list[dict]:
    eps = float(params.get("epsilon", 0.01))
    delta = float(params.get("delta", 1e-3))
    step = float(params.get("grid_step", 0.05))
    checks = []
    scenes = (
        ("special-hyperbolic-scene", special_hyperbolic_scene()),
        ("double-point-scene", double_point_scene()),
    )
    for name, scene in scenes:
        cert = exhaustion_certificate(scene, eps, delta, step)
        checks.append(_check_entry(name, cert))
    return checks


_SUITE_RUNNERS = {
    SUITE_PSH_MODELS: _suite_psh_models,
    SUITE_WINDINGS: _suite_windings,
    SUITE_SIGMA_HANDLES: _suite_sigma_handles,
    SUITE_WEINSTEIN: _suite_weinstein,
    SUITE_FLOW: _suite_flow,
    SUITE_EXHAUSTION: _suite_exhaustion,
}


def _run_verify_local(task: VerifyLocalTask) -> tuple[bool, dict]:
    checks = _SUITE_RUNNERS[task.suite](task.params)
    passed = all(c["pass"] for c in checks)
    return passed, {"suite": task.suite, "checks": checks}


# ---------------------------------------------------------------------------
# Drivers
# ---------------------------------------------------------------------------


def _label(index: int, task) -> str:
    if isinstance(task, CheckTask):
        return f"{index}:check:{task.surface}"
    if isinstance(task, PlanTask):
        return f"{index}:plan"
    if isinstance(task, ReplayTask):
        return f"{index}:replay"
    return f"{index}:verify-local:{task.suite}"


def _execute(task, scenario: Scenario) -> tuple[bool, dict]:
    if isinstance(task, CheckTask):
        return _run_check(task, scenario)
    if isinstance(task, PlanTask):
        return _run_plan(task)
    if isinstance(task, ReplayTask):
        return _run_replay(task)
    return _run_verify_local(task)


def run_tasks(scenario: Scenario) -> Report:
    results = []
    for i, task in enumerate(scenario.tasks):
        started = time.perf_counter()
        try:
            passed, details = _execute(task, scenario)
        except _TASK_ERRORS as exc:
            passed, details = False, {"error": str(exc)}
        results.append(
            TaskResult(_label(i, task), passed, details, time.perf_counter() - started)
        )
    return Report(tuple(results))


def run_scenario(path: str | Path | dict) -> Report:
    """Load and execute a scenario; see the module docstring for the schema."""
    return run_tasks(load_scenario(path))


def verify_local(suite: str, params: dict | None = None) -> Report:
    """Run one named verification suite as a single-task report."""
    if suite not in SUITES:
        raise ScenarioError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    task = VerifyLocalTask(suite, dict(params or {}))
    return run_tasks(Scenario({}, {}, (task,)))
