"""Lift paths through configuration space: representation, interpolation, checking.

A path is an ordered list of crane states with joint-linear legs. Checking
samples each leg densely enough that no DOF moves more than its per-DOF
step (derived from a meters-equivalent `resolution`) between samples, then
evaluates limits, clearance, and capacity at every sample.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .capacity import LoadChart, capacity_usage_or_overload
from .clearance import ClearanceIndex, clearance_hotset
from .crane import (
    CraneSpec,
    CraneState,
    DOF_NAMES,
    WRAPPED_DOFS,
    forward_kinematics,
    state_within_limits,
)
from .errors import ParseError
from .geometry import shortest_arc
from .scene import LiftedModule, Scene

COLLISION = "COLLISION"
CAPACITY = "CAPACITY"
LIMIT = "LIMIT"

DEFAULT_RESOLUTION = 0.25  # max meters any crane point moves between samples


@dataclass(frozen=True)
class LiftPath:
    """At least two waypoints; legs interpolate joint-linearly."""

    waypoints: tuple[CraneState, ...]

    def __post_init__(self):
        if len(self.waypoints) < 2:
            raise ParseError("a lift path needs at least 2 waypoints")

    @property
    def legs(self) -> int:
        return len(self.waypoints) - 1

    def reversed(self) -> "LiftPath":
        return LiftPath(tuple(reversed(self.waypoints)))

    def to_json(self) -> dict:
        return {"waypoints": [w.to_json() for w in self.waypoints]}

    @classmethod
    def from_json(cls, doc: dict) -> "LiftPath":
        try:
            return cls(tuple(CraneState.from_json(w) for w in doc["waypoints"]))
        except (KeyError, TypeError) as exc:
            raise ParseError(f"bad path document: {exc}") from exc


def load_path_file(path) -> LiftPath:
    with open(path, "r", encoding="utf-8") as fh:
        return LiftPath.from_json(json.load(fh))


def leg_deltas(a: CraneState, b: CraneState) -> dict[str, float]:
    """Signed per-DOF motion from a to b; wrapped angles take the shortest arc."""
    out = {}
    for dof in DOF_NAMES:
        if dof in WRAPPED_DOFS:
            out[dof] = shortest_arc(a.get(dof), b.get(dof))
        else:
            out[dof] = b.get(dof) - a.get(dof)
    return out


def interpolate(path: LiftPath, leg: int, u: float) -> CraneState:
    """State at parameter u in [0,1] along the given leg."""
    a = path.waypoints[leg]
    b = path.waypoints[leg + 1]
    deltas = leg_deltas(a, b)
    values = {dof: a.get(dof) + u * deltas[dof] for dof in DOF_NAMES}
    if u >= 1.0:
        # endpoint identity regardless of wrap representation
        return b
    return CraneState(**values)


@dataclass(frozen=True)
class Violation:
    leg: int
    u: float
    kind: str
    detail: str

    def to_json(self) -> dict:
        return {"leg": self.leg, "u": self.u, "kind": self.kind, "detail": self.detail}


@dataclass
class PathCheckResult:
    valid: bool
    violations: list[Violation]
    warnings: list[Violation] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "valid": self.valid,
            "violations": [v.to_json() for v in self.violations],
            "warnings": [w.to_json() for w in self.warnings],
        }


def dof_steps_for_resolution(spec: CraneSpec, resolution: float) -> dict[str, float]:
    """Per-DOF sample steps so no crane point moves more than `resolution` meters.

    Rotations use the full horizontal reach as the lever arm; luffing uses
    the boom length.
    """
    if resolution <= 0:
        raise ValueError("resolution must be > 0")
    lever = spec.boom_pivot_forward + spec.boom_length
    return {
        "tx": resolution,
        "ty": resolution,
        "heading": resolution / lever,
        "swing": resolution / lever,
        "luff": resolution / spec.boom_length,
        "hoist": resolution,
    }


def evaluate_state(
    scene: Scene,
    spec: CraneSpec,
    chart: LoadChart,
    module: LiftedModule,
    state: CraneState,
    index: ClearanceIndex,
    seed_cache: dict | None = None,
) -> tuple[list[tuple[str, str]], list[tuple[str, str]]]:
    """(violations, warnings) for a single state, as (kind, detail) pairs.

    COLLISION only on contact (distance == 0); a RED clearance above zero
    is a warning. CAPACITY on usage > 100% or off-chart. LIMIT on any DOF
    outside its interval.
    """
    violations: list[tuple[str, str]] = []
    warnings: list[tuple[str, str]] = []

    bad_dofs = state_within_limits(spec, state)
    for dof in bad_dofs:
        violations.append((LIMIT, f"{dof} = {state.get(dof):.6g} outside limits"))

    poses = forward_kinematics(
        spec,
        state,
        ground_z=scene.ground_z,
        rigging_length=module.rigging_length,
        module_yaw_offset=scene.module_yaw_offset,
    )
    hot, _ = clearance_hotset(
        scene, spec, poses, scene.clearance.red_below,
        scene.clearance, index, seed_cache=seed_cache,
    )
    for rec in hot:
        if rec.distance == 0.0:
            violations.append(
                (COLLISION, f"{rec.component} contacts {rec.obstacle}")
            )
        else:
            warnings.append(
                (
                    "CLEARANCE_RED",
                    f"{rec.component} within {rec.distance:.3f} m of {rec.obstacle}",
                )
            )

    cap = capacity_usage_or_overload(chart, spec, state, module)
    if cap.out_of_chart:
        violations.append((CAPACITY, "operating radius outside load chart"))
    elif cap.usage > 100.0:
        violations.append((CAPACITY, f"capacity usage {cap.usage:.1f}% exceeds 100%"))
    return violations, warnings


def check_path(
    scene: Scene,
    spec: CraneSpec,
    chart: LoadChart,
    path: LiftPath,
    resolution: float = DEFAULT_RESOLUTION,
    module: LiftedModule | None = None,
    index: ClearanceIndex | None = None,
) -> PathCheckResult:
    """Sample every leg at the given resolution and collect violations.

    Violations are sorted by (leg, u). Sampling is approximate by nature:
    a violation thinner than the resolution can slip between samples.
    """
    module = module if module is not None else scene.module
    index = index if index is not None else ClearanceIndex(scene, spec, module)
    steps = dof_steps_for_resolution(spec, resolution)
    seed_cache: dict = {}

    violations: list[Violation] = []
    warnings: list[Violation] = []
    for leg in range(path.legs):
        deltas = leg_deltas(path.waypoints[leg], path.waypoints[leg + 1])
        n = max(
            (math.ceil(abs(deltas[dof]) / steps[dof]) for dof in DOF_NAMES),
            default=1,
        )
        n = max(int(n), 1)
        for k in range(n + 1):
            u = k / n
            state = interpolate(path, leg, u)
            vios, warns = evaluate_state(
                scene, spec, chart, module, state, index, seed_cache
            )
            for kind, detail in vios:
                violations.append(Violation(leg, u, kind, detail))
            for kind, detail in warns:
                warnings.append(Violation(leg, u, kind, detail))
    return PathCheckResult(valid=not violations, violations=violations, warnings=warnings)
