"""Six-DOF crawler crane model: spec, state, forward and inverse kinematics.

The DOFs are carrier travel (tx, ty), carrier heading, superstructure swing
relative to the carrier, boom luffing angle from horizontal, and hoist line
length from boom tip to hook. Angles are radians everywhere; degrees are
accepted only in files via `_deg` keys.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import NoSolution, NonFiniteState, ParseError
from .geometry import Pose, TriMesh, box_mesh, wrap_angle

DOF_NAMES = ("tx", "ty", "heading", "swing", "luff", "hoist")
ANGLE_DOFS = ("heading", "swing", "luff")
WRAPPED_DOFS = ("heading", "swing")


@dataclass(frozen=True)
class DofLimits:
    """Per-DOF travel box and joint intervals; heading and swing are unbounded."""

    tx: tuple[float, float] = (-100.0, 100.0)
    ty: tuple[float, float] = (-100.0, 100.0)
    luff: tuple[float, float] = (0.0, math.radians(88.0))
    hoist: tuple[float, float] = (0.0, 100.0)


@dataclass(frozen=True)
class DofRates:
    """Max commanded speed per DOF (m/s or rad/s); all positive."""

    tx: float = 0.5
    ty: float = 0.5
    heading: float = 0.05
    swing: float = 0.08
    luff: float = 0.015
    hoist: float = 0.6


@dataclass(frozen=True)
class CraneSpec:
    """Geometry and limits of one mobile crane configuration."""

    name: str
    boom_length: float
    boom_pivot_forward: float
    boom_pivot_height: float
    boom_radius: float
    tailswing_radius: float
    hook_block_weight: float
    limits: DofLimits
    rates: DofRates
    carrier_mesh: TriMesh
    superstructure_mesh: TriMesh

    def __post_init__(self):
        if not self.boom_length > 0:
            raise ParseError("boom_length must be > 0")
        lo, hi = self.limits.luff
        if lo < 0 or hi > math.pi / 2 or lo > hi:
            raise ParseError("luff limits must satisfy 0 <= min <= max <= 90 deg")
        if self.limits.hoist[0] < 0 or self.limits.hoist[0] > self.limits.hoist[1]:
            raise ParseError("hoist limits must satisfy 0 <= min <= max")
        for dof in DOF_NAMES:
            if not getattr(self.rates, dof) > 0:
                raise ParseError(f"rate for {dof} must be > 0")

    @property
    def max_radius(self) -> float:
        return self.boom_pivot_forward + self.boom_length * math.cos(self.limits.luff[0])

    @property
    def min_radius(self) -> float:
        return self.boom_pivot_forward + self.boom_length * math.cos(self.limits.luff[1])


@dataclass(frozen=True)
class CraneState:
    """The six DOF values."""

    tx: float = 0.0
    ty: float = 0.0
    heading: float = 0.0
    swing: float = 0.0
    luff: float = 0.0
    hoist: float = 0.0

    def as_tuple(self) -> tuple[float, ...]:
        return (self.tx, self.ty, self.heading, self.swing, self.luff, self.hoist)

    def get(self, dof: str) -> float:
        return getattr(self, dof)

    def with_dof(self, dof: str, value: float) -> "CraneState":
        return replace(self, **{dof: value})

    def is_finite(self) -> bool:
        return all(math.isfinite(v) for v in self.as_tuple())

    def to_json(self) -> dict:
        return {dof: getattr(self, dof) for dof in DOF_NAMES}

    @classmethod
    def from_json(cls, doc: dict) -> "CraneState":
        values = {}
        for dof in DOF_NAMES:
            if dof in doc:
                values[dof] = float(doc[dof])
            elif dof in ANGLE_DOFS and f"{dof}_deg" in doc:
                values[dof] = math.radians(float(doc[f"{dof}_deg"]))
            else:
                raise ParseError(f"crane state missing field '{dof}'")
        return cls(**values)


@dataclass(frozen=True)
class ComponentPoses:
    """World placement of every crane component for one state."""

    carrier: Pose
    superstructure: Pose
    boom_foot: np.ndarray
    boom_tip: np.ndarray
    hook: np.ndarray
    module_pose: Pose
    operating_radius: float

    def to_json(self) -> dict:
        return {
            "carrier": self.carrier.to_json(),
            "superstructure": self.superstructure.to_json(),
            "boom_foot": self.boom_foot.tolist(),
            "boom_tip": self.boom_tip.tolist(),
            "hook": self.hook.tolist(),
            "module_pose": self.module_pose.to_json(),
            "operating_radius": self.operating_radius,
        }


def forward_kinematics(
    spec: CraneSpec,
    state: CraneState,
    ground_z: float = 0.0,
    rigging_length: float = 0.0,
    module_yaw_offset: float = 0.0,
) -> ComponentPoses:
    """Compute world poses of carrier, superstructure, boom, hook, and module.

    The hook hangs plumb below the boom tip; the module hangs rigging_length
    below the hook with yaw facing + module_yaw_offset.
    """
    if not state.is_finite():
        raise NonFiniteState(f"non-finite crane state {state}")
    facing = state.heading + state.swing
    cf, sf = math.cos(facing), math.sin(facing)
    cb, sb = math.cos(state.luff), math.sin(state.luff)
    a = spec.boom_pivot_forward
    length = spec.boom_length

    foot = np.array(
        [state.tx + a * cf, state.ty + a * sf, ground_z + spec.boom_pivot_height]
    )
    tip = np.array(
        [foot[0] + length * cb * cf, foot[1] + length * cb * sf, foot[2] + length * sb]
    )
    hook = np.array([tip[0], tip[1], tip[2] - state.hoist])
    module_pose = Pose(
        (hook[0], hook[1], hook[2] - rigging_length), facing + module_yaw_offset
    )
    return ComponentPoses(
        carrier=Pose((state.tx, state.ty, ground_z), state.heading),
        superstructure=Pose((state.tx, state.ty, ground_z), facing),
        boom_foot=foot,
        boom_tip=tip,
        hook=hook,
        module_pose=module_pose,
        operating_radius=a + length * cb,
    )


def operating_radius(spec: CraneSpec, state: CraneState) -> float:
    """Horizontal distance from the slew axis to the hook."""
    return spec.boom_pivot_forward + spec.boom_length * math.cos(state.luff)


def clamp_state(spec: CraneSpec, state: CraneState) -> CraneState:
    """Clamp bounded DOFs into their limit intervals, wrap heading/swing to (-pi, pi]."""
    lim = spec.limits

    def clamp(v, lo, hi):
        return min(max(v, lo), hi)

    return CraneState(
        tx=clamp(state.tx, *lim.tx),
        ty=clamp(state.ty, *lim.ty),
        heading=wrap_angle(state.heading),
        swing=wrap_angle(state.swing),
        luff=clamp(state.luff, *lim.luff),
        hoist=clamp(state.hoist, *lim.hoist),
    )


def state_within_limits(
    spec: CraneSpec, state: CraneState, tol: float = 1e-9
) -> list[str]:
    """Names of bounded DOFs violating their intervals (empty when legal)."""
    lim = spec.limits
    bad = []
    for dof in ("tx", "ty", "luff", "hoist"):
        lo, hi = getattr(lim, dof)
        v = state.get(dof)
        if v < lo - tol or v > hi + tol:
            bad.append(dof)
    return bad


def solve_hook_ik(
    spec: CraneSpec,
    tx: float,
    ty: float,
    heading: float,
    target,
    ground_z: float = 0.0,
) -> CraneState:
    """Solve (swing, luff, hoist) placing the hook at `target` with the carrier fixed.

    Raises NoSolution when the target radius is outside the boom's reach or
    the required hoist length is outside its limits.
    """
    target = np.asarray(target, dtype=np.float64)
    if not np.all(np.isfinite(target)):
        raise NonFiniteState("non-finite IK target")
    dx = target[0] - tx
    dy = target[1] - ty
    radius = math.hypot(dx, dy)
    r_min, r_max = spec.min_radius, spec.max_radius
    if radius < r_min - 1e-9 or radius > r_max + 1e-9:
        raise NoSolution(
            f"target radius {radius:.3f} m outside reach [{r_min:.3f}, {r_max:.3f}] m"
        )
    cos_luff = (min(max(radius, r_min), r_max) - spec.boom_pivot_forward) / spec.boom_length
    luff = math.acos(min(max(cos_luff, -1.0), 1.0))
    facing = math.atan2(dy, dx) if radius > 1e-12 else heading
    swing = wrap_angle(facing - heading)
    tip_z = ground_z + spec.boom_pivot_height + spec.boom_length * math.sin(luff)
    hoist = tip_z - target[2]
    lo, hi = spec.limits.hoist
    if hoist < lo - 1e-9 or hoist > hi + 1e-9:
        raise NoSolution(f"required hoist {hoist:.3f} m outside [{lo}, {hi}] m")
    state = CraneState(tx=tx, ty=ty, heading=heading, swing=swing, luff=luff, hoist=hoist)
    if state_within_limits(spec, state):
        raise NoSolution("solution violates DOF limits")
    return state


_DEFAULT_CARRIER = ((-3.0, -2.0, 0.0), (3.0, 2.0, 1.2))


def _default_superstructure(tailswing_radius: float) -> TriMesh:
    return box_mesh((-tailswing_radius, -1.6, 1.3), (2.5, 1.6, 3.2))


def _mesh_from_doc(doc, fallback: TriMesh) -> TriMesh:
    if doc is None:
        return fallback
    return TriMesh.from_json(doc)


def load_crane_spec(source) -> CraneSpec:
    """Load a crane spec from a JSON document (dict, str/bytes, or file path)."""
    doc = _coerce_document(source)
    try:
        limits_doc = doc.get("limits", {})
        rates_doc = doc.get("rates", {})
        limits = DofLimits(
            tx=_interval(limits_doc, "tx", DofLimits.tx),
            ty=_interval(limits_doc, "ty", DofLimits.ty),
            luff=_interval(limits_doc, "luff", DofLimits.luff, angular=True),
            hoist=_interval(limits_doc, "hoist", DofLimits.hoist),
        )
        rates = DofRates(
            tx=_rate(rates_doc, "tx", rates_doc.get("travel")),
            ty=_rate(rates_doc, "ty", rates_doc.get("travel")),
            heading=_rate(rates_doc, "heading"),
            swing=_rate(rates_doc, "swing"),
            luff=_rate(rates_doc, "luff", angular=True),
            hoist=_rate(rates_doc, "hoist"),
        )
        tailswing = float(doc.get("tailswing_radius", 4.0))
        return CraneSpec(
            name=str(doc.get("name", "crane")),
            boom_length=float(doc["boom_length"]),
            boom_pivot_forward=float(doc.get("boom_pivot_forward", 0.0)),
            boom_pivot_height=float(doc.get("boom_pivot_height", 0.0)),
            boom_radius=float(doc.get("boom_radius", 0.3)),
            tailswing_radius=tailswing,
            hook_block_weight=float(doc.get("hook_block_weight_t", 0.0)),
            limits=limits,
            rates=rates,
            carrier_mesh=_mesh_from_doc(doc.get("carrier_mesh"), box_mesh(*_DEFAULT_CARRIER)),
            superstructure_mesh=_mesh_from_doc(
                doc.get("superstructure_mesh"), _default_superstructure(tailswing)
            ),
        )
    except KeyError as exc:
        raise ParseError(f"crane spec missing field {exc}") from exc
    except (TypeError, ValueError) as exc:
        raise ParseError(f"crane spec field error: {exc}") from exc


def crane_spec_to_document(spec: CraneSpec) -> dict:
    return {
        "name": spec.name,
        "boom_length": spec.boom_length,
        "boom_pivot_forward": spec.boom_pivot_forward,
        "boom_pivot_height": spec.boom_pivot_height,
        "boom_radius": spec.boom_radius,
        "tailswing_radius": spec.tailswing_radius,
        "hook_block_weight_t": spec.hook_block_weight,
        "limits": {
            "tx": list(spec.limits.tx),
            "ty": list(spec.limits.ty),
            "luff": list(spec.limits.luff),
            "hoist": list(spec.limits.hoist),
        },
        "rates": {dof: getattr(spec.rates, dof) for dof in DOF_NAMES},
        "carrier_mesh": spec.carrier_mesh.to_json(),
        "superstructure_mesh": spec.superstructure_mesh.to_json(),
    }


def _coerce_document(source) -> dict:
    if isinstance(source, dict):
        return source
    if isinstance(source, (bytes, bytearray)):
        text = source.decode("utf-8")
    elif isinstance(source, str) and source.lstrip().startswith("{"):
        text = source
    else:
        with open(source, "r", encoding="utf-8") as fh:
            text = fh.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("document root must be a JSON object")
    return doc


def _interval(doc: dict, key: str, default, angular: bool = False):
    if angular and f"{key}_deg" in doc:
        lo, hi = doc[f"{key}_deg"]
        return (math.radians(float(lo)), math.radians(float(hi)))
    if key in doc:
        lo, hi = doc[key]
        return (float(lo), float(hi))
    return default


def _rate(doc: dict, key: str, fallback=None, angular: bool = False):
    if angular and f"{key}_deg" in doc:
        return math.radians(float(doc[f"{key}_deg"]))
    if key in doc:
        return float(doc[key])
    if fallback is not None:
        return float(fallback)
    return getattr(DofRates, key)
