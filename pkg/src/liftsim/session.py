"""Deterministic fixed-timestep simulation sessions with recording and replay.

The engine never reads the wall clock: state advances only through step(),
each tick applies one sampled control input, and identical inputs always
produce bit-identical telemetry. A session record (input log plus content
hashes of the scene/crane/chart) replays to the exact same stream.
"""
from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field, replace

from .capacity import CapacityResult, LoadChart, capacity_usage_or_overload
from .clearance import (
    ClearanceIndex,
    ClearanceRecord,
    RED,
    YELLOW,
    clearance_report,
    clearance_topk,
    classify,
)
from .crane import (
    ComponentPoses,
    CraneSpec,
    CraneState,
    DOF_NAMES,
    clamp_state,
    crane_spec_to_document,
    forward_kinematics,
)
from .errors import BadTimestep, HashMismatch, InvalidScene, ParseError, SessionClosed
from .scene import LiftedModule, Scene, scene_to_document, validate_scene

DT_MIN = 1.0 / 120.0
DT_MAX = 1.0 / 20.0
TOP_K_CLEARANCES = 8
TWO_BLOCK_MARGIN = 0.5  # meters of hoist left before the block meets the tip

OVERLOAD = "OVERLOAD"
NEAR_CAPACITY = "NEAR_CAPACITY"
CLEARANCE_RED = "CLEARANCE_RED"
CLEARANCE_YELLOW = "CLEARANCE_YELLOW"
DOF_LIMIT = "DOF_LIMIT"
TWO_BLOCK = "TWO_BLOCK"


def _clamp_fraction(v: float) -> float:
    return min(max(float(v), -1.0), 1.0)


@dataclass(frozen=True)
class ControlInput:
    """Commanded rate fraction per DOF, clamped to [-1, 1]."""

    tx: float = 0.0
    ty: float = 0.0
    heading: float = 0.0
    swing: float = 0.0
    luff: float = 0.0
    hoist: float = 0.0

    def __post_init__(self):
        for dof in DOF_NAMES:
            object.__setattr__(self, dof, _clamp_fraction(getattr(self, dof)))

    def to_json(self) -> dict:
        return {dof: getattr(self, dof) for dof in DOF_NAMES}

    @classmethod
    def from_json(cls, doc: dict) -> "ControlInput":
        return cls(**{dof: float(doc.get(dof, 0.0)) for dof in DOF_NAMES})


@dataclass(frozen=True)
class TelemetryFrame:
    tick: int
    sim_time: float
    state: CraneState
    poses: ComponentPoses
    capacity: CapacityResult
    clearances: tuple[ClearanceRecord, ...]
    min_clearance: ClearanceRecord | None
    flags: tuple[str, ...]

    def to_json(self) -> dict:
        return {
            "tick": self.tick,
            "sim_time": self.sim_time,
            "state": self.state.to_json(),
            "poses": self.poses.to_json(),
            "capacity": self.capacity.to_json(),
            "clearances": [r.to_json() for r in self.clearances],
            "min_clearance": self.min_clearance.to_json() if self.min_clearance else None,
            "flags": list(self.flags),
        }


def canonical_json_bytes(doc) -> bytes:
    """Canonical serialization used for hashing and byte-equality checks."""
    return json.dumps(doc, sort_keys=True, separators=(",", ":")).encode("utf-8")


def content_hash(doc) -> str:
    """64-bit content digest of a canonical JSON document."""
    return hashlib.blake2b(canonical_json_bytes(doc), digest_size=8).hexdigest()


def scene_hash(scene: Scene) -> str:
    return content_hash(scene_to_document(scene))


def spec_hash(spec: CraneSpec) -> str:
    return content_hash(crane_spec_to_document(spec))


def chart_hash(chart: LoadChart) -> str:
    return content_hash(
        {
            "boom_lengths": chart.boom_lengths.tolist(),
            "radii": chart.radii.tolist(),
            "rated": [[None if not math.isfinite(v) else v for v in row] for row in chart.rated],
        }
    )


@dataclass(frozen=True)
class SessionHeader:
    scene_hash: str
    spec_hash: str
    chart_hash: str
    dt: float
    start_state: CraneState

    def to_json(self) -> dict:
        return {
            "scene_hash": self.scene_hash,
            "spec_hash": self.spec_hash,
            "chart_hash": self.chart_hash,
            "dt": self.dt,
            "start_state": self.start_state.to_json(),
        }

    @classmethod
    def from_json(cls, doc: dict) -> "SessionHeader":
        return cls(
            scene_hash=str(doc["scene_hash"]),
            spec_hash=str(doc["spec_hash"]),
            chart_hash=str(doc["chart_hash"]),
            dt=float(doc["dt"]),
            start_state=CraneState.from_json(doc["start_state"]),
        )


@dataclass
class SessionRecord:
    """Input log: (tick, input) per step, ticks strictly increasing."""

    header: SessionHeader
    entries: list[tuple[int, ControlInput]] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "header": self.header.to_json(),
            "entries": [[tick, inp.to_json()] for tick, inp in self.entries],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "SessionRecord":
        try:
            entries = [
                (int(tick), ControlInput.from_json(inp)) for tick, inp in doc["entries"]
            ]
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad session record: {exc}") from exc
        last = 0
        for tick, _ in entries:
            if tick <= last:
                raise ParseError("record ticks must be strictly increasing from 1")
            last = tick
        return cls(header=SessionHeader.from_json(doc["header"]), entries=entries)


class Session:
    """One live simulation: fixed timestep, one stepping context, immutable frames."""

    _counter = 0

    def __init__(
        self,
        scene: Scene,
        spec: CraneSpec,
        chart: LoadChart,
        dt: float,
        module: LiftedModule | None = None,
        session_id: str | None = None,
    ):
        issues = validate_scene(scene, spec)
        if issues:
            raise InvalidScene(issues)
        if not (DT_MIN - 1e-12 <= dt <= DT_MAX + 1e-12):
            raise BadTimestep(f"dt {dt} outside [{DT_MIN:.6f}, {DT_MAX:.6f}] s")
        Session._counter += 1
        self.id = session_id or f"sess-{Session._counter:04d}"
        self.scene = scene
        self.spec = spec
        self.chart = chart
        self.module = module if module is not None else scene.module
        self.dt = float(dt)
        self.index = ClearanceIndex(scene, spec, self.module)
        self._seed_cache: dict = {}
        self.tick = 0
        self.state = scene.pick_state
        self.closed = False
        self.record = SessionRecord(
            header=SessionHeader(
                scene_hash=scene_hash(scene),
                spec_hash=spec_hash(spec),
                chart_hash=chart_hash(chart),
                dt=self.dt,
                start_state=scene.pick_state,
            )
        )
        self.last_frame = self._telemetry([])

    def _telemetry(self, clamped_dofs: list[str]) -> TelemetryFrame:
        poses = forward_kinematics(
            self.spec,
            self.state,
            ground_z=self.scene.ground_z,
            rigging_length=self.module.rigging_length,
            module_yaw_offset=self.scene.module_yaw_offset,
        )
        capacity = capacity_usage_or_overload(self.chart, self.spec, self.state, self.module)
        records = clearance_topk(
            self.scene, self.spec, poses, TOP_K_CLEARANCES,
            self.scene.clearance, self.index, seed_cache=self._seed_cache,
        )
        min_rec = records[0] if records else None

        flags = set()
        if capacity.usage >= 100.0 or capacity.out_of_chart:
            flags.add(OVERLOAD)
        if capacity.usage >= 90.0 or capacity.out_of_chart:
            flags.add(NEAR_CAPACITY)
        if min_rec is not None:
            code = classify(min_rec.distance, self.scene.clearance)
            if code == RED:
                flags.add(CLEARANCE_RED)
            elif code == YELLOW:
                flags.add(CLEARANCE_YELLOW)
        if clamped_dofs:
            flags.add(DOF_LIMIT)
        if self.state.hoist <= self.spec.limits.hoist[0] + TWO_BLOCK_MARGIN:
            flags.add(TWO_BLOCK)

        return TelemetryFrame(
            tick=self.tick,
            sim_time=self.tick * self.dt,
            state=self.state,
            poses=poses,
            capacity=capacity,
            clearances=tuple(records),
            min_clearance=min_rec,
            flags=tuple(sorted(flags)),
        )

    def full_clearance(self) -> list[ClearanceRecord]:
        """Complete clearance report at the current state (beyond the top-k)."""
        poses = forward_kinematics(
            self.spec,
            self.state,
            ground_z=self.scene.ground_z,
            rigging_length=self.module.rigging_length,
            module_yaw_offset=self.scene.module_yaw_offset,
        )
        return clearance_report(self.scene, self.spec, poses, self.scene.clearance, self.index)

    def step(self, control: ControlInput) -> TelemetryFrame:
        """Advance one tick under the given rate-fraction command."""
        if self.closed:
            raise SessionClosed(f"session {self.id} is closed")
        raw = {}
        for dof in DOF_NAMES:
            rate = getattr(self.spec.rates, dof)
            raw[dof] = self.state.get(dof) + getattr(control, dof) * rate * self.dt
        raw_state = CraneState(**raw)
        clamped = clamp_state(self.spec, raw_state)
        clamped_dofs = [
            dof
            for dof in ("tx", "ty", "luff", "hoist")
            if clamped.get(dof) != raw_state.get(dof)
        ]
        self.state = clamped
        self.tick += 1
        self.record.entries.append((self.tick, control))
        self.last_frame = self._telemetry(clamped_dofs)
        return self.last_frame

    def close(self) -> None:
        self.closed = True


def create_session(
    scene: Scene,
    spec: CraneSpec,
    chart: LoadChart,
    dt: float,
    module: LiftedModule | None = None,
) -> Session:
    """Validate inputs and start a session at the pick state, tick 0."""
    return Session(scene, spec, chart, dt, module)


def replay(
    record: SessionRecord,
    scene: Scene,
    spec: CraneSpec,
    chart: LoadChart,
    module: LiftedModule | None = None,
):
    """Re-run a session record; yields the tick-0 frame then one frame per entry.

    Raises HashMismatch when the supplied inputs differ from the recorded
    hashes, so a replay can never silently run against edited inputs.
    """
    expected = (
        record.header.scene_hash,
        record.header.spec_hash,
        record.header.chart_hash,
    )
    actual = (scene_hash(scene), spec_hash(spec), chart_hash(chart))
    for name, exp, act in zip(("scene", "crane spec", "chart"), expected, actual):
        if exp != act:
            raise HashMismatch(f"{name} hash {act} does not match recorded {exp}")
    if record.header.start_state != scene.pick_state:
        raise HashMismatch("recorded start state does not match the scene pick state")

    session = Session(scene, spec, chart, record.header.dt, module)
    yield session.last_frame
    current = ControlInput()
    next_tick = 1
    for tick, control in record.entries:
        while next_tick < tick:  # gap: the mailbox holds the last input
            yield session.step(current)
            next_tick += 1
        current = control
        yield session.step(current)
        next_tick += 1


def frame_stream_bytes(frames) -> bytes:
    """Canonical byte serialization of a telemetry stream (one JSON per line)."""
    return b"\n".join(canonical_json_bytes(f.to_json()) for f in frames)
