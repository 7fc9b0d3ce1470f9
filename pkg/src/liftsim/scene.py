"""Neutral site description: obstacles, lifted module, crane placement, lift states.

Scene documents are JSON with meshes inline or referenced as Wavefront OBJ
files (relative paths). The `units` tag must be exactly "m,t,rad".
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .crane import CraneSpec, CraneState, state_within_limits
from .errors import MissingMesh, ParseError, UnitError
from .geometry import Pose, TriMesh, parse_obj

UNITS_TAG = "m,t,rad"


@dataclass(frozen=True)
class ClearanceThresholds:
    """Color-coding bands: RED below red_below, YELLOW below yellow_below, else GREEN."""

    red_below: float = 0.9
    yellow_below: float = 3.0

    def __post_init__(self):
        if not (0 < self.red_below < self.yellow_below):
            raise ParseError("clearance thresholds must satisfy 0 < red < yellow")


@dataclass(frozen=True)
class Obstacle:
    id: str
    mesh: TriMesh
    pose: Pose
    tag: str = ""


@dataclass(frozen=True)
class LiftedModule:
    """Prefabricated element being lifted; mesh origin is the rigging attach point."""

    id: str
    mesh: TriMesh
    weight: float
    rigging_weight: float = 0.0
    rigging_length: float = 0.0


@dataclass(frozen=True)
class Scene:
    ground_z: float
    obstacles: tuple[Obstacle, ...]
    module: LiftedModule
    crane_position: tuple[float, float, float]
    pick_state: CraneState
    set_state: CraneState
    module_yaw_offset: float = 0.0
    clearance: ClearanceThresholds = ClearanceThresholds()
    units: str = UNITS_TAG


@dataclass(frozen=True)
class Issue:
    code: str
    message: str

    def __str__(self) -> str:
        return f"{self.code}: {self.message}"


def _load_mesh(doc, base_dir: Path | None, context: str) -> TriMesh:
    if not isinstance(doc, dict):
        raise ParseError(f"{context}: mesh must be an object")
    if "obj" in doc:
        rel = doc["obj"]
        path = (base_dir / rel) if base_dir is not None else Path(rel)
        if not path.is_file():
            raise MissingMesh(f"{context}: mesh file not found: {rel}")
        return parse_obj(path.read_text(encoding="utf-8"))
    return TriMesh.from_json(doc)


def _pose_from_doc(doc) -> Pose:
    doc = doc or {}
    t = doc.get("translation", (0.0, 0.0, 0.0))
    if "yaw_deg" in doc:
        yaw = math.radians(float(doc["yaw_deg"]))
    else:
        yaw = float(doc.get("yaw", 0.0))
    return Pose((float(t[0]), float(t[1]), float(t[2])), yaw)


def load_scene(document, base_dir=None) -> Scene:
    """Load a scene from JSON bytes/str/dict; mesh refs resolve against base_dir."""
    if isinstance(document, (bytes, bytearray)):
        text = document.decode("utf-8")
        doc = _parse_json(text)
    elif isinstance(document, str):
        doc = _parse_json(document)
    elif isinstance(document, dict):
        doc = document
    else:
        raise ParseError(f"unsupported scene document type {type(document)!r}")
    base = Path(base_dir) if base_dir is not None else None

    units = doc.get("units")
    if units is None:
        raise UnitError("scene document missing 'units' field")
    if units != UNITS_TAG:
        raise UnitError(f"unsupported units tag {units!r}; expected {UNITS_TAG!r}")

    try:
        ground_z = float(doc["ground_z"])
        crane_pos = tuple(float(v) for v in doc["crane_position"])
        obstacles = []
        seen = set()
        for i, odoc in enumerate(doc.get("obstacles", [])):
            oid = str(odoc["id"])
            if oid in seen:
                raise ParseError(f"duplicate obstacle id {oid!r}")
            seen.add(oid)
            obstacles.append(
                Obstacle(
                    id=oid,
                    mesh=_load_mesh(odoc["mesh"], base, f"obstacle {oid!r}"),
                    pose=_pose_from_doc(odoc.get("pose")),
                    tag=str(odoc.get("tag", "")),
                )
            )
        mdoc = doc["module"]
        module = LiftedModule(
            id=str(mdoc["id"]),
            mesh=_load_mesh(mdoc["mesh"], base, "module"),
            weight=float(mdoc["weight_t"]),
            rigging_weight=float(mdoc.get("rigging_weight_t", 0.0)),
            rigging_length=float(mdoc.get("rigging_length_m", 0.0)),
        )
        cdoc = doc.get("clearance")
        thresholds = (
            ClearanceThresholds(float(cdoc["red_m"]), float(cdoc["yellow_m"]))
            if cdoc
            else ClearanceThresholds()
        )
        if "module_yaw_offset_deg" in doc:
            yaw_offset = math.radians(float(doc["module_yaw_offset_deg"]))
        else:
            yaw_offset = float(doc.get("module_yaw_offset", 0.0))
        return Scene(
            ground_z=ground_z,
            obstacles=tuple(obstacles),
            module=module,
            crane_position=crane_pos,
            pick_state=CraneState.from_json(doc["pick_state"]),
            set_state=CraneState.from_json(doc["set_state"]),
            module_yaw_offset=yaw_offset,
            clearance=thresholds,
        )
    except KeyError as exc:
        raise ParseError(f"scene document missing field {exc}") from exc
    except (TypeError, ValueError) as exc:
        raise ParseError(f"scene field error: {exc}") from exc


def _parse_json(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("scene document root must be a JSON object")
    return doc


def load_scene_file(path) -> Scene:
    path = Path(path)
    return load_scene(path.read_bytes(), base_dir=path.parent)


def scene_to_document(scene: Scene) -> dict:
    """Scene as a plain JSON document with all meshes inline (round-trip exact)."""
    return {
        "units": scene.units,
        "ground_z": scene.ground_z,
        "crane_position": list(scene.crane_position),
        "module_yaw_offset": scene.module_yaw_offset,
        "clearance": {
            "red_m": scene.clearance.red_below,
            "yellow_m": scene.clearance.yellow_below,
        },
        "obstacles": [
            {
                "id": o.id,
                "tag": o.tag,
                "mesh": o.mesh.to_json(),
                "pose": o.pose.to_json(),
            }
            for o in scene.obstacles
        ],
        "module": {
            "id": scene.module.id,
            "mesh": scene.module.mesh.to_json(),
            "weight_t": scene.module.weight,
            "rigging_weight_t": scene.module.rigging_weight,
            "rigging_length_m": scene.module.rigging_length,
        },
        "pick_state": scene.pick_state.to_json(),
        "set_state": scene.set_state.to_json(),
    }


def serialize_scene(scene: Scene) -> bytes:
    return json.dumps(scene_to_document(scene), indent=2).encode("utf-8")


def validate_scene(scene: Scene, spec: CraneSpec) -> list[Issue]:
    """Collect issues; empty means the scene is ready for a session with this crane."""
    issues: list[Issue] = []
    if scene.units != UNITS_TAG:
        issues.append(Issue("UnitError", f"units tag {scene.units!r} != {UNITS_TAG!r}"))
    if scene.module.weight <= 0:
        issues.append(
            Issue("NonPositiveWeight", f"module weight {scene.module.weight} t must be > 0")
        )
    if scene.module.rigging_weight < 0:
        issues.append(Issue("NegativeRigging", "rigging weight must be >= 0"))
    if scene.module.rigging_length < 0:
        issues.append(Issue("NegativeRigging", "rigging length must be >= 0"))
    if scene.crane_position[2] != scene.ground_z:
        issues.append(
            Issue(
                "CraneOffGround",
                f"crane_position z {scene.crane_position[2]} != ground_z {scene.ground_z}",
            )
        )
    seen: set[str] = set()
    for obs in scene.obstacles:
        if obs.id in seen:
            issues.append(Issue("DuplicateObstacleId", f"duplicate obstacle id {obs.id!r}"))
        seen.add(obs.id)
    for name, state in (("pick_state", scene.pick_state), ("set_state", scene.set_state)):
        if not state.is_finite():
            issues.append(Issue("NonFiniteState", f"{name} has non-finite values"))
            continue
        for dof in state_within_limits(spec, state):
            issues.append(
                Issue(
                    "LimitViolation",
                    f"{name} {dof} = {state.get(dof):.6g} outside limit "
                    f"{getattr(spec.limits, dof)}",
                )
            )
    return issues
