"""liftsim: deterministic heavy-lift crane planning simulator.

Six-DOF crawler crane kinematics, load-chart capacity usage, exact mesh
clearance queries, lattice path checking/planning, and replayable fixed-
timestep simulation sessions served over a WebSocket protocol.
"""
from .bvh import AabbTree, build_index, min_distance, min_distance_segment
from .capacity import (
    CapacityResult,
    LoadChart,
    capacity_usage,
    gross_load,
    load_chart_csv,
    rated_capacity,
)
from .clearance import (
    ClearanceIndex,
    ClearanceRecord,
    build_clearance_index,
    classify,
    clearance_report,
)
from .crane import (
    ComponentPoses,
    CraneSpec,
    CraneState,
    clamp_state,
    forward_kinematics,
    load_crane_spec,
    operating_radius,
    solve_hook_ik,
)
from .errors import (
    BadTimestep,
    DegenerateMesh,
    HashMismatch,
    InvalidScene,
    LiftSimError,
    MissingMesh,
    NoPath,
    NoSolution,
    NonFiniteState,
    OutOfChart,
    ParseError,
    SessionClosed,
    SnapError,
    UnitError,
)
from .geometry import Pose, TriMesh, parse_obj
from .paths import (
    LiftPath,
    PathCheckResult,
    Violation,
    check_path,
    interpolate,
)
from .planner import LatticeSpec, plan_path
from .scene import (
    ClearanceThresholds,
    Issue,
    LiftedModule,
    Obstacle,
    Scene,
    load_scene,
    load_scene_file,
    serialize_scene,
    validate_scene,
)
from .session import (
    ControlInput,
    Session,
    SessionRecord,
    TelemetryFrame,
    create_session,
    replay,
)

__version__ = "0.1.0"
