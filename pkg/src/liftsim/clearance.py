"""Minimum-distance queries between crane/load geometry and site obstacles.

Components tested against every obstacle: carrier mesh, superstructure mesh
(covers the tailswing envelope), boom capsule, load line (boom tip to hook,
zero radius), and the suspended module mesh. Distances are exact;
intersection reports 0 rather than a penetration depth.

Repeated reports accept a seed cache carrying last call's witness pairs:
rigidly moved, those points stay on the surfaces and bound the new minimum
from above, so the tree search prunes almost immediately. Seeds change
query time only, never results.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bvh import AabbTree, build_index, min_distance, min_distance_segment
from .crane import ComponentPoses, CraneSpec
from .geometry import Pose
from .scene import ClearanceThresholds, LiftedModule, Scene

GREEN = "GREEN"
YELLOW = "YELLOW"
RED = "RED"

COMPONENTS = ("carrier", "superstructure", "boom", "load_line", "module")


def classify(distance: float, thresholds: ClearanceThresholds) -> str:
    """Color code for a clearance distance."""
    if distance < thresholds.red_below:
        return RED
    if distance < thresholds.yellow_below:
        return YELLOW
    return GREEN


@dataclass(frozen=True)
class ClearanceRecord:
    component: str
    obstacle: str
    distance: float
    point_on_component: tuple[float, float, float]
    point_on_obstacle: tuple[float, float, float]
    code: str

    def to_json(self) -> dict:
        return {
            "component": self.component,
            "obstacle": self.obstacle,
            "distance_m": self.distance,
            "point_on_component": list(self.point_on_component),
            "point_on_obstacle": list(self.point_on_obstacle),
            "code": self.code,
        }


class ClearanceIndex:
    """Prebuilt spatial indices: obstacles in world frame, crane parts in local frames."""

    def __init__(self, scene: Scene, spec: CraneSpec, module: LiftedModule | None = None):
        module = module if module is not None else scene.module
        self.obstacles: list[tuple[str, AabbTree]] = [
            (obs.id, build_index(obs.mesh, obs.pose)) for obs in scene.obstacles
        ]
        self.carrier = build_index(spec.carrier_mesh)
        self.superstructure = build_index(spec.superstructure_mesh)
        self.module = build_index(module.mesh)
        self.boom_radius = spec.boom_radius


def build_clearance_index(
    scene: Scene, spec: CraneSpec, module: LiftedModule | None = None
) -> ClearanceIndex:
    return ClearanceIndex(scene, spec, module)


def _mesh_query(tree: AabbTree, obstacle: AabbTree, pose: Pose, cache, key):
    seed = None
    if cache is not None and key in cache:
        w_local, w_obs = cache[key]
        seed = (pose.apply(w_local), w_obs)
    d, (w_c, w_o) = min_distance(tree, obstacle, pose_a=pose, seed=seed)
    if cache is not None:
        cache[key] = (pose.inverse().apply(w_c), w_o)
    return d, w_c, w_o


def _segment_query(obstacle: AabbTree, p, q, cache, key):
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    seed = None
    if cache is not None and key in cache:
        s, w_obs = cache[key]
        seed = (w_obs, p + s * (q - p))
    d, (w_o, w_s) = min_distance_segment(obstacle, p, q, seed=seed)
    if cache is not None:
        axis = q - p
        denom = float(axis @ axis)
        s = float((w_s - p) @ axis) / denom if denom > 0 else 0.0
        cache[key] = (min(max(s, 0.0), 1.0), w_o)
    return d, w_s, w_o


class _PairQuery:
    """One (component, obstacle) distance query with a cheap lower bound."""

    __slots__ = ("component", "obstacle", "lower_bound", "_run")

    def __init__(self, component, obstacle, lower_bound, run):
        self.component = component
        self.obstacle = obstacle
        self.lower_bound = lower_bound
        self._run = run

    def evaluate(self) -> tuple[float, np.ndarray, np.ndarray]:
        return self._run()


def _posed_root_box(tree: AabbTree, pose: Pose | None):
    lo, hi = tree.root_box
    if pose is None:
        return lo, hi
    cen = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    rot = pose.rotation()
    new_cen = rot @ cen + np.asarray(pose.translation)
    new_half = np.abs(rot) @ half
    return new_cen - new_half, new_cen + new_half


def _box_gap(lo0, hi0, lo1, hi1) -> float:
    gap = np.maximum(0.0, np.maximum(lo0 - hi1, lo1 - hi0))
    return float(np.sqrt(gap @ gap))


def _segment_lb(tree: AabbTree, p, q) -> float:
    """Lower bound for segment-tree distance via piecewise segment AABBs."""
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    lo, hi = tree.root_box
    pieces = max(1, int(np.ceil(np.linalg.norm(q - p) / 4.0)))
    best = np.inf
    for k in range(pieces):
        a = p + (q - p) * (k / pieces)
        b = p + (q - p) * ((k + 1) / pieces)
        best = min(best, _box_gap(np.minimum(a, b), np.maximum(a, b), lo, hi))
    return best


def _pair_queries(
    index: ClearanceIndex, poses: ComponentPoses, seed_cache: dict | None
) -> list[_PairQuery]:
    queries: list[_PairQuery] = []
    mesh_parts = (
        ("carrier", index.carrier, poses.carrier),
        ("superstructure", index.superstructure, poses.superstructure),
        ("module", index.module, poses.module_pose),
    )
    posed_roots = {
        name: _posed_root_box(tree, pose) for name, tree, pose in mesh_parts
    }
    for oid, tree in index.obstacles:
        obs_lo, obs_hi = tree.root_box

        for name, part_tree, pose in mesh_parts:
            lo, hi = posed_roots[name]
            lb = _box_gap(lo, hi, obs_lo, obs_hi)

            def run(part_tree=part_tree, tree=tree, pose=pose, name=name, oid=oid):
                return _mesh_query(part_tree, tree, pose, seed_cache, (name, oid))

            queries.append(_PairQuery(name, oid, lb, run))

        boom_lb = max(0.0, _segment_lb(tree, poses.boom_foot, poses.boom_tip) - index.boom_radius)

        def run_boom(tree=tree, oid=oid):
            d, w_axis, w_o = _segment_query(
                tree, poses.boom_foot, poses.boom_tip, seed_cache, ("boom", oid)
            )
            if d <= index.boom_radius:
                return 0.0, w_axis, w_o
            direction = (w_o - w_axis) / d
            return d - index.boom_radius, w_axis + index.boom_radius * direction, w_o

        queries.append(_PairQuery("boom", oid, boom_lb, run_boom))

        line_lb = _segment_lb(tree, poses.boom_tip, poses.hook)

        def run_line(tree=tree, oid=oid):
            return _segment_query(tree, poses.boom_tip, poses.hook, seed_cache, ("load_line", oid))

        queries.append(_PairQuery("load_line", oid, line_lb, run_line))
    return queries


def _record(q: _PairQuery, dist, w_c, w_o, thresholds) -> ClearanceRecord:
    return ClearanceRecord(
        component=q.component,
        obstacle=q.obstacle,
        distance=float(dist),
        point_on_component=tuple(float(v) for v in w_c),
        point_on_obstacle=tuple(float(v) for v in w_o),
        code=classify(float(dist), thresholds),
    )


def clearance_report(
    scene: Scene,
    spec: CraneSpec,
    poses: ComponentPoses,
    thresholds: ClearanceThresholds | None = None,
    index: ClearanceIndex | None = None,
    seed_cache: dict | None = None,
) -> list[ClearanceRecord]:
    """One record per (component, obstacle) pair, ascending by distance.

    Pass a prebuilt ClearanceIndex to avoid rebuilding spatial indices on
    every call, and a persistent seed_cache dict when calling repeatedly
    for nearby states (interactive stepping, path sampling).
    """
    thresholds = thresholds if thresholds is not None else scene.clearance
    index = index if index is not None else ClearanceIndex(scene, spec)

    records: list[ClearanceRecord] = []
    for q in _pair_queries(index, poses, seed_cache):
        d, w_c, w_o = q.evaluate()
        records.append(_record(q, d, w_c, w_o, thresholds))
    records.sort(key=lambda r: (r.distance, r.component, r.obstacle))
    return records


def clearance_topk(
    scene: Scene,
    spec: CraneSpec,
    poses: ComponentPoses,
    k: int,
    thresholds: ClearanceThresholds | None = None,
    index: ClearanceIndex | None = None,
    seed_cache: dict | None = None,
) -> list[ClearanceRecord]:
    """The k closest (component, obstacle) records, exact, ascending.

    Pairs are evaluated in lower-bound order and evaluation stops once the
    k-th best exact distance is below every remaining bound, so far pairs
    never pay for an exact query. The result equals clearance_report[:k].
    """
    thresholds = thresholds if thresholds is not None else scene.clearance
    index = index if index is not None else ClearanceIndex(scene, spec)

    queries = _pair_queries(index, poses, seed_cache)
    queries.sort(key=lambda q: (q.lower_bound, q.component, q.obstacle))
    evaluated: list[ClearanceRecord] = []
    for pos, q in enumerate(queries):
        if len(evaluated) >= k:
            kth = sorted(r.distance for r in evaluated)[k - 1]
            if q.lower_bound >= kth:
                break
        d, w_c, w_o = q.evaluate()
        evaluated.append(_record(q, d, w_c, w_o, thresholds))
    evaluated.sort(key=lambda r: (r.distance, r.component, r.obstacle))
    return evaluated[:k]


def clearance_hotset(
    scene: Scene,
    spec: CraneSpec,
    poses: ComponentPoses,
    threshold: float,
    thresholds: ClearanceThresholds | None = None,
    index: ClearanceIndex | None = None,
    seed_cache: dict | None = None,
) -> tuple[list[ClearanceRecord], float]:
    """All records with distance < threshold (exact) plus the exact global min.

    Complete: any pair with exact distance below the threshold also has a
    lower bound below it, so it is always evaluated.
    """
    thresholds = thresholds if thresholds is not None else scene.clearance
    index = index if index is not None else ClearanceIndex(scene, spec)

    queries = _pair_queries(index, poses, seed_cache)
    queries.sort(key=lambda q: (q.lower_bound, q.component, q.obstacle))
    hot: list[ClearanceRecord] = []
    global_min = np.inf
    for q in queries:
        if q.lower_bound >= threshold and q.lower_bound >= global_min:
            continue
        d, w_c, w_o = q.evaluate()
        global_min = min(global_min, float(d))
        if d < threshold:
            hot.append(_record(q, d, w_c, w_o, thresholds))
    hot.sort(key=lambda r: (r.distance, r.component, r.obstacle))
    return hot, float(global_min)
