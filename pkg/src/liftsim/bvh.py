"""Axis-aligned bounding-box trees over triangle sets and min-distance queries.

Trees are built once per mesh (median split on the longest centroid axis,
leaves hold at most 4 triangles). Queries accept an optional pose per side
so a tree built in a component's local frame can be queried at any tick
without rebuilding.
"""
from __future__ import annotations

import math

import numpy as np

from . import _dist
from .errors import DegenerateMesh
from .geometry import Pose, TriMesh

LEAF_SIZE = 4

# pose packed for the kernels: (r00, r01, r10, r11, tx, ty, tz); yaw-only
# rotations leave z rows/columns trivial
_IDENTITY_POSE = np.array([1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0])


class AabbTree:
    """Flat-array AABB tree over a (T,3,3) triangle corner array."""

    __slots__ = ("bmin", "bmax", "left", "right", "start", "count", "order", "tris")

    def __init__(self, tris: np.ndarray):
        tris = np.ascontiguousarray(np.asarray(tris, dtype=np.float64))
        if tris.ndim != 3 or tris.shape[1:] != (3, 3) or len(tris) == 0:
            raise DegenerateMesh("spatial index needs a non-empty (T,3,3) triangle array")
        tri_min = tris.min(axis=1)
        tri_max = tris.max(axis=1)
        centroids = tris.mean(axis=1)

        order = np.arange(len(tris), dtype=np.int64)
        bmin: list[np.ndarray] = []
        bmax: list[np.ndarray] = []
        left: list[int] = []
        right: list[int] = []
        start: list[int] = []
        count: list[int] = []

        # (range_start, range_count, node_index); children patched after allocation
        stack = [(0, len(tris), self._alloc(bmin, bmax, left, right, start, count))]
        while stack:
            s, n, node = stack.pop()
            ids = order[s : s + n]
            bmin[node] = tri_min[ids].min(axis=0)
            bmax[node] = tri_max[ids].max(axis=0)
            if n <= LEAF_SIZE:
                start[node] = s
                count[node] = n
                continue
            cen = centroids[ids]
            axis = int(np.argmax(cen.max(axis=0) - cen.min(axis=0)))
            half = n // 2
            sel = np.argpartition(cen[:, axis], half)
            order[s : s + n] = ids[sel]
            lchild = self._alloc(bmin, bmax, left, right, start, count)
            rchild = self._alloc(bmin, bmax, left, right, start, count)
            left[node] = lchild
            right[node] = rchild
            stack.append((s, half, lchild))
            stack.append((s + half, n - half, rchild))

        self.bmin = np.ascontiguousarray(bmin)
        self.bmax = np.ascontiguousarray(bmax)
        self.left = np.array(left, dtype=np.int64)
        self.right = np.array(right, dtype=np.int64)
        self.start = np.array(start, dtype=np.int64)
        self.count = np.array(count, dtype=np.int64)
        self.order = order
        self.tris = tris

    @staticmethod
    def _alloc(bmin, bmax, left, right, start, count) -> int:
        bmin.append(None)
        bmax.append(None)
        left.append(-1)
        right.append(-1)
        start.append(0)
        count.append(0)
        return len(left) - 1

    def __len__(self) -> int:
        return len(self.tris)

    @property
    def root_box(self) -> tuple[np.ndarray, np.ndarray]:
        return self.bmin[0], self.bmax[0]

    def _arrays(self):
        return (
            self.bmin, self.bmax, self.left, self.right,
            self.start, self.count, self.order, self.tris,
        )


def build_index(mesh: TriMesh, pose: Pose | None = None) -> AabbTree:
    """Build a spatial index over the mesh with the pose baked in (world frame)."""
    corners = mesh.triangle_corners()
    if pose is not None:
        corners = pose.apply(corners.reshape(-1, 3)).reshape(-1, 3, 3)
    return AabbTree(corners)


def split_long_edges(tris: np.ndarray, max_edge: float) -> np.ndarray:
    """Split triangles at longest-edge midpoints until no edge exceeds max_edge.

    The union of the output triangles is exactly the input surface, so
    distance queries against the result are unchanged; the payoff is much
    tighter leaf boxes for large faces.
    """
    tris = np.asarray(tris, dtype=np.float64)
    out = []
    work = list(tris)
    while work:
        tri = work.pop()
        e = np.array(
            [
                np.dot(tri[1] - tri[0], tri[1] - tri[0]),
                np.dot(tri[2] - tri[1], tri[2] - tri[1]),
                np.dot(tri[0] - tri[2], tri[0] - tri[2]),
            ]
        )
        k = int(np.argmax(e))
        if e[k] <= max_edge * max_edge:
            out.append(tri)
            continue
        a, b, c = tri[k], tri[(k + 1) % 3], tri[(k + 2) % 3]
        m = 0.5 * (a + b)
        work.append(np.array([a, m, c]))
        work.append(np.array([m, b, c]))
    return np.array(out)


def build_refined_index(
    mesh: TriMesh, pose: Pose | None = None, max_edge: float = 0.75
) -> AabbTree:
    """Index over the same surface with long triangles split for tight leaf boxes."""
    corners = mesh.triangle_corners()
    if pose is not None:
        corners = pose.apply(corners.reshape(-1, 3)).reshape(-1, 3, 3)
    return AabbTree(split_long_edges(corners, max_edge))


def _packed_pose(pose: Pose | None) -> np.ndarray:
    if pose is None:
        return _IDENTITY_POSE
    c = math.cos(pose.yaw)
    s = math.sin(pose.yaw)
    tx, ty, tz = pose.translation
    return np.array([c, -s, s, c, tx, ty, tz])


_NO_SEED = np.array([np.inf, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0])


def _packed_seed(seed) -> np.ndarray:
    """Pack an (upper_bound_pair) seed: (point_on_a, point_on_b) arrays."""
    if seed is None:
        return _NO_SEED
    wa, wb = seed
    d2 = float(
        (wa[0] - wb[0]) ** 2 + (wa[1] - wb[1]) ** 2 + (wa[2] - wb[2]) ** 2
    )
    return np.array([d2, wa[0], wa[1], wa[2], wb[0], wb[1], wb[2]])


def min_distance(
    a: AabbTree,
    b: AabbTree,
    pose_a: Pose | None = None,
    pose_b: Pose | None = None,
    seed: tuple | None = None,
) -> tuple[float, tuple[np.ndarray, np.ndarray]]:
    """Exact minimum distance between two triangle sets, with witness points.

    Returns (distance, (witness_on_a, witness_on_b)); distance is 0 with a
    shared witness when the sets intersect. `seed` is an optional pair of
    known surface points used as the starting upper bound (pure pruning
    aid; the result is exact with or without it).
    """
    d, w0x, w0y, w0z, w1x, w1y, w1z = _dist.tree_tree_min(
        *a._arrays(), _packed_pose(pose_a),
        *b._arrays(), _packed_pose(pose_b),
        _packed_seed(seed),
    )
    return float(d), (np.array([w0x, w0y, w0z]), np.array([w1x, w1y, w1z]))


_SEGMENT_PIECE = 4.0  # long segments are searched piecewise for tight AABBs


def min_distance_segment(
    tree: AabbTree,
    p,
    q,
    pose: Pose | None = None,
    seed: tuple | None = None,
) -> tuple[float, tuple[np.ndarray, np.ndarray]]:
    """Exact minimum distance between a (posed) tree and a world segment pq.

    Long segments are split into short pieces (same point set, far tighter
    bounding boxes); the running best seeds each piece so later pieces
    prune immediately. Returns (distance, (witness_on_tree, witness_on_segment)).
    """
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    pieces = max(1, int(math.ceil(float(np.linalg.norm(q - p)) / _SEGMENT_PIECE)))
    pose_arr = _packed_pose(pose)
    arrays = tree._arrays()
    packed = _packed_seed(seed)
    best = packed[0]
    out = packed
    for k in range(pieces):
        a = p + (q - p) * (k / pieces)
        b = p + (q - p) * ((k + 1) / pieces)
        d, wtx, wty, wtz, wsx, wsy, wsz = _dist.tree_segment_min(
            *arrays, pose_arr, a, b, out
        )
        if d * d < best or not math.isfinite(best):
            best = d * d
            out = np.array([best, wtx, wty, wtz, wsx, wsy, wsz])
    return math.sqrt(float(out[0])), (
        np.array([out[1], out[2], out[3]]),
        np.array([out[4], out[5], out[6]]),
    )


def triangle_pair_distance(t0, t1) -> tuple[float, tuple[np.ndarray, np.ndarray]]:
    """Distance between two single triangles given as (3,3) arrays."""
    d, w0x, w0y, w0z, w1x, w1y, w1z = _dist.triangle_pair_distance_arrays(
        np.ascontiguousarray(t0, dtype=np.float64),
        np.ascontiguousarray(t1, dtype=np.float64),
    )
    return float(d), (np.array([w0x, w0y, w0z]), np.array([w1x, w1y, w1z]))


def warm_up() -> None:
    """Trigger numba compilation of the distance kernels."""
    tri = np.array([[[0.0, 0, 0], [1, 0, 0], [0, 1, 0]]])
    t = AabbTree(tri)
    min_distance(t, t, None, Pose((3.0, 0.0, 0.0)))
    min_distance_segment(t, (0, 0, 1), (1, 1, 1))
    triangle_pair_distance(tri[0], tri[0] + np.array([0.0, 0.0, 2.0]))
